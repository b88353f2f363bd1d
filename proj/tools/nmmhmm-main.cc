// tools/nmmhmm-main.cc

// Copyright 2026  The nmmhmm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.
//
// Single binary exposing the full workflow: feature extraction, per-class
// generative training (GMM-HMM / NMM-HMM), maximum-likelihood evaluation with
// noise sweeps, synthetic benchmarks, model sampling and report rendering.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmmhmm/classifier.h"
#include "nmmhmm/config-json.h"
#include "nmmhmm/dataset.h"
#include "nmmhmm/model-io.h"
#include "nmmhmm/synthetic.h"
#include "nmmhmm/trainer.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nmmhmm;

namespace {

// Machine-readable error listing on stderr, one JSON object per line.
void EmitError(const std::string& context, const std::string& what) {
  std::cerr << json{{"context", context}, {"error", what}}.dump() << "\n";
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string DefaultCacheDir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("NMMHMM_CACHE_DIR"); env != nullptr && *env != '\0')
    return env;
  return "cache";
}

struct CommonOptions {
  std::string manifest_path;
  std::string config_path;
  std::string cache_dir;
  std::string folding_path;
};

json LoadRunConfig(const std::string& path) {
  if (path.empty()) return json::object();
  json j = LoadJsonFile(path);
  static const std::set<std::string> known = {"features", "train", "noise"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw std::runtime_error("run config: unknown key '" + key + "'");
  return j;
}

FeatureConfig FeaturesFromRunConfig(const json& run_config) {
  if (run_config.contains("features")) return FeatureConfigFromJson(run_config.at("features"));
  return FeatureConfig{};
}

DatasetManifest LoadManifestMaybeFolded(const CommonOptions& options) {
  DatasetManifest manifest = LoadManifest(options.manifest_path);
  if (!options.folding_path.empty())
    manifest = FoldLabels(manifest, LoadLabelFolding(options.folding_path));
  return manifest;
}

double MeanLength(const std::vector<FeatureSequence>& seqs) {
  if (seqs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : seqs) total += static_cast<double>(s.NumFrames());
  return total / static_cast<double>(seqs.size());
}

// ---------------------------------------------------------------------------
// extract

int RunExtract(const CommonOptions& options, bool dry_run) {
  const json run_config = LoadRunConfig(options.config_path);
  const FeatureConfig feature_config = FeaturesFromRunConfig(run_config);
  const DatasetManifest manifest = LoadManifestMaybeFolded(options);

  if (dry_run) {
    std::map<std::string, int> train_counts, test_counts;
    for (const auto& e : manifest.entries)
      ++(e.is_train ? train_counts : test_counts)[e.label];
    std::printf("manifest ok: %zu entries, %zu classes\n", manifest.entries.size(),
                train_counts.size() + [&] {
                  std::size_t extra = 0;
                  for (const auto& [label, n] : test_counts)
                    if (!train_counts.count(label)) ++extra;
                  return extra;
                }());
    for (const auto& [label, n] : train_counts)
      std::printf("%-16s train=%-6d test=%d\n", label.c_str(), n, test_counts[label]);
    return 0;
  }

  ExtractStats stats;
  const auto classes =
      BuildClassDatasets(manifest, feature_config, DefaultCacheDir(options.cache_dir), &stats);
  std::printf("%-16s %8s %8s %12s %12s\n", "class", "train", "test", "mean_T(train)",
              "mean_T(test)");
  for (const auto& cls : classes)
    std::printf("%-16s %8zu %8zu %12.1f %12.1f\n", cls.label.c_str(), cls.train.size(),
                cls.test.size(), MeanLength(cls.train), MeanLength(cls.test));
  std::fprintf(stderr, "cache hits: %lld, misses: %lld\n",
               static_cast<long long>(stats.cache_hits),
               static_cast<long long>(stats.cache_misses));
  for (const auto& err : stats.errors) EmitError("extract", err);
  return stats.errors.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// train

struct TrainCliOverrides {
  std::string emission;
  int num_components = -1;
  int flow_blocks = -1;
  int hidden_width = -1;
  double learning_rate = -1.0;
  int batch_size = -1;
  int max_flow_epochs = -1;
  int max_outer_iters = -1;
  int num_states = -1;
  int state_divisor = -1;
  int64_t seed = -1;
  bool no_standardize = false;
};

TrainConfig MergeTrainConfig(const json& run_config, const TrainCliOverrides& cli) {
  TrainConfig config;
  if (run_config.contains("train")) config = TrainConfigFromJson(run_config.at("train"));
  if (!cli.emission.empty()) {
    if (cli.emission == "gmm")
      config.emission_kind = EmissionKind::kGmm;
    else if (cli.emission == "nmm")
      config.emission_kind = EmissionKind::kNmm;
    else
      throw std::runtime_error("--emission must be gmm or nmm");
  }
  if (cli.num_components >= 0) config.num_components = cli.num_components;
  if (cli.flow_blocks >= 0) config.flow_blocks = cli.flow_blocks;
  if (cli.hidden_width >= 0) config.hidden_width = cli.hidden_width;
  if (cli.learning_rate >= 0) config.learning_rate = cli.learning_rate;
  if (cli.batch_size >= 0) config.batch_size = cli.batch_size;
  if (cli.max_flow_epochs >= 0) config.max_flow_epochs = cli.max_flow_epochs;
  if (cli.max_outer_iters >= 0) config.max_outer_iters = cli.max_outer_iters;
  if (cli.num_states >= 0) config.num_states = cli.num_states;
  if (cli.state_divisor >= 0) config.state_divisor = cli.state_divisor;
  if (cli.seed >= 0) config.seed = static_cast<uint64_t>(cli.seed);
  if (cli.no_standardize) config.standardize = false;
  config.Validate();
  return config;
}

int RunTrain(const CommonOptions& options, const TrainCliOverrides& cli,
             const std::string& out_dir, const std::string& classes_filter, int jobs) {
  const json run_config = LoadRunConfig(options.config_path);
  const FeatureConfig feature_config = FeaturesFromRunConfig(run_config);
  const TrainConfig train_config = MergeTrainConfig(run_config, cli);

  const DatasetManifest manifest = LoadManifestMaybeFolded(options);
  ExtractStats stats;
  auto classes =
      BuildClassDatasets(manifest, feature_config, DefaultCacheDir(options.cache_dir), &stats);
  for (const auto& err : stats.errors) EmitError("train/extract", err);
  if (!stats.errors.empty()) return 1;

  if (!classes_filter.empty()) {
    std::set<std::string> keep;
    std::istringstream in(classes_filter);
    std::string label;
    while (std::getline(in, label, ',')) keep.insert(label);
    std::erase_if(classes, [&](const ClassDataset& c) { return !keep.count(c.label); });
    if (classes.empty()) throw std::runtime_error("--classes filter matched nothing");
  }

  std::vector<ClassSequences> dataset;
  dataset.reserve(classes.size());
  for (auto& cls : classes) dataset.push_back({cls.label, std::move(cls.train)});

  auto results = TrainAllClasses(dataset, train_config, jobs);
  fs::create_directories(out_dir);
  int failures = 0;
  for (auto& result : results) {
    result.model.config_fingerprint = feature_config.Fingerprint();
    const std::string base = (fs::path(out_dir) / result.model.label).string();
    SaveModel(base + ".model", result.model);
    WriteTextFile(base + "_trainlog.csv", result.log.ToCsv());
    if (result.log.diverged) {
      EmitError("train:" + result.model.label, result.log.divergence_note);
      ++failures;
    }
    std::fprintf(stderr, "trained %-16s iters=%zu loglik=%.3f%s\n", result.model.label.c_str(),
                 result.log.rows.size(), result.log.final_log_likelihood,
                 result.log.converged ? " (converged)" : "");
  }
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// eval

std::vector<HmmModel> LoadModelsDir(const std::string& models_dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(models_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".model")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw std::runtime_error("no .model files in " + models_dir);
  std::vector<HmmModel> models;
  models.reserve(paths.size());
  for (const auto& p : paths) models.push_back(LoadModel(p));
  return models;
}

std::string ConfusionCsv(const std::map<std::pair<std::string, std::string>, int64_t>& confusion) {
  std::ostringstream out;
  out << "label,predicted,count\n";
  for (const auto& [key, count] : confusion)
    out << key.first << "," << key.second << "," << count << "\n";
  return out.str();
}

int RunEval(const CommonOptions& options, const std::string& models_dir,
            const std::string& noise_config_path, const std::string& out_dir, bool to_stdout,
            bool length_normalize, int jobs) {
  const json run_config = LoadRunConfig(options.config_path);
  const FeatureConfig feature_config = FeaturesFromRunConfig(run_config);
  const auto models = LoadModelsDir(models_dir);

  const DatasetManifest manifest = LoadManifestMaybeFolded(options);
  std::vector<LabeledAudio> test;
  for (const auto& entry : manifest.entries) {
    if (entry.is_train) continue;
    test.push_back(
        {ReadWavSegment(manifest.ResolvePath(entry), entry.segment_start, entry.segment_end),
         entry.label});
  }
  if (test.empty()) throw std::runtime_error("manifest has no test entries");

  std::vector<NoiseSpec> specs;
  if (!noise_config_path.empty())
    specs = NoiseSpecsFromJson(LoadJsonFile(noise_config_path));
  else if (run_config.contains("noise"))
    specs = NoiseSpecsFromJson(run_config.at("noise"));

  EvalOptions eval_options;
  eval_options.length_normalize = length_normalize;
  eval_options.jobs = jobs;

  const EvalReport report = NoiseSweep(models, test, specs, feature_config, eval_options);

  // Confusion counts on the clean condition.
  std::vector<LabeledSequence> clean_feats;
  clean_feats.reserve(test.size());
  for (const auto& item : test)
    clean_feats.push_back({ExtractFeatures(item.audio, feature_config), item.label});
  std::map<std::pair<std::string, std::string>, int64_t> confusion;
  Evaluate(models, clean_feats, &confusion, eval_options);

  fs::create_directories(out_dir);
  WriteTextFile((fs::path(out_dir) / "report.csv").string(), RenderReportCsv(report));
  WriteTextFile((fs::path(out_dir) / "report.txt").string(), RenderReportText(report));
  WriteTextFile((fs::path(out_dir) / "confusion.csv").string(), ConfusionCsv(confusion));
  if (to_stdout) std::cout << RenderReportText(report);

  int errored = 0;
  for (const auto& row : report.rows)
    if (!row.error.empty()) {
      EmitError("eval:" + row.condition, row.error);
      ++errored;
    }
  return errored == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// synth-bench

struct BenchOptions {
  std::string out_dir;
  uint64_t seed = 7;
  std::string variant = "warped";
  int train_per_class = -1;
  int test_per_class = -1;
  int gmm_components = 20;
  int nmm_components = 3;
  int flow_blocks = 4;
  int hidden_width = 16;
  int max_outer_iters = 30;
  int max_flow_epochs = 6;
  double learning_rate = 3e-3;
  std::vector<double> snrs = {25.0, 20.0, 15.0, 10.0};
  int jobs = 1;
};

std::string SideBySideTable(const EvalReport& gmm, const EvalReport& nmm) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-24s %18s %18s\n", "condition", "GMM-HMM", "NMM-HMM");
  out << buf;
  for (std::size_t i = 0; i < gmm.rows.size() && i < nmm.rows.size(); ++i) {
    auto cell = [](const EvalRow& row) {
      char c[48];
      if (!row.error.empty())
        std::snprintf(c, sizeof(c), "ERROR");
      else if (row.condition == "clean")
        std::snprintf(c, sizeof(c), "%.1f", row.accuracy);
      else
        std::snprintf(c, sizeof(c), "%.1f (%.1f)", row.accuracy, row.drop);
      return std::string(c);
    };
    std::snprintf(buf, sizeof(buf), "%-24s %18s %18s\n", gmm.rows[i].condition.c_str(),
                  cell(gmm.rows[i]).c_str(), cell(nmm.rows[i]).c_str());
    out << buf;
  }
  return out.str();
}

int RunSynthBench(const BenchOptions& options) {
  SyntheticDatasetSpec spec = MakeBenchmarkSpec(options.seed, options.variant == "warped");
  if (options.variant != "warped" && options.variant != "separated")
    throw std::runtime_error("--variant must be warped or separated");
  if (options.train_per_class > 0) spec.train_per_class = options.train_per_class;
  if (options.test_per_class > 0) spec.test_per_class = options.test_per_class;

  std::fprintf(stderr, "generating %s benchmark (seed %llu)\n", options.variant.c_str(),
               static_cast<unsigned long long>(options.seed));
  const SyntheticDataset dataset = GenerateSyntheticDataset(spec);

  std::vector<ClassSequences> train_set;
  std::vector<LabeledSequence> test_set;
  for (const auto& cls : dataset.classes) {
    train_set.push_back({cls.label, cls.train});
    for (const auto& seq : cls.test) test_set.push_back({seq, cls.label});
  }

  TrainConfig base;
  base.seed = options.seed;
  base.num_states = 3;
  base.max_outer_iters = options.max_outer_iters;
  base.max_flow_epochs = options.max_flow_epochs;
  base.learning_rate = options.learning_rate;
  base.hidden_width = options.hidden_width;
  base.flow_blocks = options.flow_blocks;
  base.batch_size = 64;

  TrainConfig gmm_config = base;
  gmm_config.emission_kind = EmissionKind::kGmm;
  gmm_config.num_components = options.gmm_components;

  TrainConfig nmm_config = base;
  nmm_config.emission_kind = EmissionKind::kNmm;
  nmm_config.num_components = options.nmm_components;

  fs::create_directories(options.out_dir);
  EvalOptions eval_options;
  eval_options.jobs = options.jobs;

  auto run_family = [&](const TrainConfig& config, const std::string& name) {
    std::fprintf(stderr, "training %s family\n", name.c_str());
    auto results = TrainAllClasses(train_set, config, options.jobs);
    std::vector<HmmModel> models;
    for (auto& result : results) {
      const std::string base_path = (fs::path(options.out_dir) / (name + "_" + result.model.label)).string();
      SaveModel(base_path + ".model", result.model);
      WriteTextFile(base_path + "_trainlog.csv", result.log.ToCsv());
      models.push_back(std::move(result.model));
    }
    const EvalReport report = FeatureNoiseSweep(models, test_set, options.snrs,
                                                DeriveSeed(options.seed, "featnoise"), eval_options);
    WriteTextFile((fs::path(options.out_dir) / (name + "_report.csv")).string(),
                  RenderReportCsv(report));
    WriteTextFile((fs::path(options.out_dir) / (name + "_report.txt")).string(),
                  RenderReportText(report));
    return report;
  };

  const EvalReport gmm_report = run_family(gmm_config, "gmm");
  const EvalReport nmm_report = run_family(nmm_config, "nmm");
  const std::string side_by_side = SideBySideTable(gmm_report, nmm_report);
  WriteTextFile((fs::path(options.out_dir) / "side_by_side.txt").string(), side_by_side);
  std::cout << side_by_side;
  return 0;
}

// ---------------------------------------------------------------------------
// sample

int RunSample(const std::string& model_path, int count, int length, uint64_t seed,
              const std::string& out_dir) {
  const HmmModel model = LoadModel(model_path);
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const FeatureSequence seq =
        SampleSequence(model, length, DeriveSeed(seed, static_cast<uint64_t>(i)));
    char name[64];
    std::snprintf(name, sizeof(name), "sample_%04d.nmmf", i);
    WriteFeatureCache((fs::path(out_dir) / name).string(), seq);
  }
  std::fprintf(stderr, "wrote %d sequences of length %d from %s\n", count, length,
               model_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// report

int RunReport(const std::string& in_path, const std::string& format, const std::string& out_path,
              bool to_stdout) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open report: " + in_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const EvalReport report = ParseReportCsv(buf.str());
  const std::string rendered =
      format == "csv" ? RenderReportCsv(report) : RenderReportText(report);
  if (!out_path.empty()) WriteTextFile(out_path, rendered);
  if (to_stdout || out_path.empty()) std::cout << rendered;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generative sequence classification with GMM-HMM and NMM-HMM emissions"};
  app.require_subcommand(1);

  CommonOptions common;
  bool dry_run = false;
  auto* extract = app.add_subcommand("extract", "Extract MFCC features for a manifest");
  extract->add_option("--manifest", common.manifest_path, "Dataset manifest CSV")->required();
  extract->add_option("--config", common.config_path, "Run config JSON");
  extract->add_option("--cache-dir", common.cache_dir,
                      "Feature cache directory (default $NMMHMM_CACHE_DIR or ./cache)");
  extract->add_option("--folding", common.folding_path, "Label folding CSV (raw,folded)");
  extract->add_flag("--dry-run", dry_run, "Validate the manifest without extracting");

  TrainCliOverrides train_cli;
  std::string train_out_dir, classes_filter;
  int jobs = 1;
  auto* train = app.add_subcommand("train", "Train one model per class");
  train->add_option("--manifest", common.manifest_path, "Dataset manifest CSV")->required();
  train->add_option("--config", common.config_path, "Run config JSON");
  train->add_option("--cache-dir", common.cache_dir, "Feature cache directory");
  train->add_option("--folding", common.folding_path, "Label folding CSV");
  train->add_option("--out-dir", train_out_dir, "Output directory for models and logs")
      ->required();
  train->add_option("--emission", train_cli.emission, "Emission family: gmm or nmm");
  train->add_option("--K", train_cli.num_components, "Mixture components per state");
  train->add_option("--flow-blocks", train_cli.flow_blocks, "Coupling-layer pairs (NMM)");
  train->add_option("--hidden-width", train_cli.hidden_width, "Coupling-net hidden width");
  train->add_option("--lr", train_cli.learning_rate, "Adam learning rate");
  train->add_option("--batch-size", train_cli.batch_size, "Sequences per mini-batch");
  train->add_option("--flow-epochs", train_cli.max_flow_epochs, "Inner flow epochs per iteration");
  train->add_option("--max-outer", train_cli.max_outer_iters, "Maximum outer EM iterations");
  train->add_option("--num-states", train_cli.num_states, "Fixed state count (0 = heuristic)");
  train->add_option("--state-divisor", train_cli.state_divisor, "Heuristic mean_T divisor");
  train->add_option("--seed", train_cli.seed, "Run seed");
  train->add_flag("--no-standardize", train_cli.no_standardize, "Disable feature standardization");
  train->add_option("--classes", classes_filter, "Comma-separated class filter");
  train->add_option("--jobs", jobs, "Parallel class-training jobs");

  std::string models_dir, noise_config_path, eval_out_dir;
  bool eval_stdout = false, length_normalize = false;
  auto* eval = app.add_subcommand("eval", "Evaluate models, optionally across noise conditions");
  eval->add_option("--models-dir", models_dir, "Directory of .model files")->required();
  eval->add_option("--manifest", common.manifest_path, "Dataset manifest CSV")->required();
  eval->add_option("--config", common.config_path, "Run config JSON");
  eval->add_option("--folding", common.folding_path, "Label folding CSV");
  eval->add_option("--noise-config", noise_config_path, "Noise sweep spec JSON");
  eval->add_option("--out-dir", eval_out_dir, "Report output directory")->required();
  eval->add_flag("--stdout", eval_stdout, "Print the text report to standard output");
  eval->add_flag("--length-normalize", length_normalize,
                 "Divide per-class log-likelihoods by sequence length");
  eval->add_option("--jobs", jobs, "Parallel classification jobs");

  BenchOptions bench;
  auto* synth = app.add_subcommand("synth-bench",
                                   "Synthetic benchmark: generate, train both families, sweep");
  synth->add_option("--out-dir", bench.out_dir, "Output directory")->required();
  synth->add_option("--seed", bench.seed, "Benchmark seed");
  synth->add_option("--variant", bench.variant, "separated or warped");
  synth->add_option("--train-per-class", bench.train_per_class, "Training sequences per class");
  synth->add_option("--test-per-class", bench.test_per_class, "Test sequences per class");
  synth->add_option("--gmm-K", bench.gmm_components, "GMM components per state");
  synth->add_option("--nmm-K", bench.nmm_components, "NMM components per state");
  synth->add_option("--flow-blocks", bench.flow_blocks, "Coupling-layer pairs");
  synth->add_option("--hidden-width", bench.hidden_width, "Coupling-net hidden width");
  synth->add_option("--max-outer", bench.max_outer_iters, "Maximum outer EM iterations");
  synth->add_option("--flow-epochs", bench.max_flow_epochs, "Inner flow epochs per iteration");
  synth->add_option("--lr", bench.learning_rate, "Adam learning rate");
  synth->add_option("--snrs", bench.snrs, "Feature-noise SNR levels in dB");
  synth->add_option("--jobs", bench.jobs, "Parallel jobs");

  std::string sample_model, sample_out_dir;
  int sample_count = 1, sample_length = 100;
  uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "Sample feature sequences from a model");
  sample->add_option("--model", sample_model, "Model file")->required();
  sample->add_option("--count", sample_count, "Number of sequences");
  sample->add_option("--length", sample_length, "Frames per sequence");
  sample->add_option("--seed", sample_seed, "Sampling seed");
  sample->add_option("--out-dir", sample_out_dir, "Output directory")->required();

  std::string report_in, report_format = "text", report_out;
  bool report_stdout = false;
  auto* report = app.add_subcommand("report", "Re-render a report CSV");
  report->add_option("--in", report_in, "Report CSV path")->required();
  report->add_option("--format", report_format, "text or csv");
  report->add_option("--out", report_out, "Output path (default: stdout)");
  report->add_flag("--stdout", report_stdout, "Also print to standard output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return RunExtract(common, dry_run);
    if (train->parsed()) return RunTrain(common, train_cli, train_out_dir, classes_filter, jobs);
    if (eval->parsed())
      return RunEval(common, models_dir, noise_config_path, eval_out_dir, eval_stdout,
                     length_normalize, jobs);
    if (synth->parsed()) return RunSynthBench(bench);
    if (sample->parsed())
      return RunSample(sample_model, sample_count, sample_length, sample_seed, sample_out_dir);
    if (report->parsed()) return RunReport(report_in, report_format, report_out, report_stdout);
  } catch (const std::exception& e) {
    EmitError(app.get_subcommands().empty() ? "nmmhmm" : app.get_subcommands()[0]->get_name(),
              e.what());
    return 1;
  }
  return 0;
}
