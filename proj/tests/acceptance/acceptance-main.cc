// tests/acceptance/acceptance-main.cc

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
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line; the
// process exits non-zero if any criterion fails. Criterion 9 drives the CLI
// binary (path via --cli or $NMMHMM_CLI).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nmmhmm/classifier.h"
#include "nmmhmm/dataset.h"
#include "nmmhmm/diag-gmm.h"
#include "nmmhmm/feature.h"
#include "nmmhmm/model-io.h"
#include "nmmhmm/nmm.h"
#include "nmmhmm/noise.h"
#include "nmmhmm/synthetic.h"
#include "nmmhmm/trainer.h"
#include "testing/oracles.h"

namespace fs = std::filesystem;
using namespace nmmhmm;
using nmmhmm::testing::BruteForceLogLikelihood;
using nmmhmm::testing::CentralDifferenceGradient;
using nmmhmm::testing::NumericalJacobianLogDet;
using nmmhmm::testing::RandomizeFlowParameters;
using nmmhmm::testing::RelativeError;

namespace {

struct Check {
  std::vector<std::string> failures;

  void Require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename T>
  void RequireLe(T value, T bound, const std::string& what) {
    if (!(value <= bound)) {
      std::ostringstream msg;
      msg << what << " (got " << value << ", want <= " << bound << ")";
      failures.push_back(msg.str());
    }
  }
};

std::string g_cli_path;
fs::path g_work_dir;

int RunCommand(const std::string& command) { return std::system(command.c_str()); }

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Vector RandomVector(Eigen::Index n, Rng* rng, double scale = 1.0) {
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * gauss(*rng);
  return v;
}

// ---------------------------------------------------------------------------

void Criterion1FlowCorrectness(Check* check) {
  // Round-trip invertibility at the paper's configuration (D=39, L=8).
  auto flow = FlowGenerator::CreateStack(39, 4, 16, 1);
  RandomizeFlowParameters(&flow, 2, 0.25);
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector x = RandomVector(39, &rng);
    worst = std::max(worst, (flow.Forward(flow.Inverse(x, nullptr)) - x).cwiseAbs().maxCoeff());
  }
  check->RequireLe(worst, 1e-6, "round-trip error, D=39 L=8, 1000 inputs");

  // Analytic log-determinant against a numerically differentiated Jacobian.
  for (int dim : {2, 4, 8}) {
    auto small = FlowGenerator::CreateStack(dim, 2, 8, 10 + static_cast<uint64_t>(dim));
    RandomizeFlowParameters(&small, 20 + static_cast<uint64_t>(dim), 0.35);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = RandomVector(dim, &rng);
      double log_det = 0.0;
      small.Inverse(x, &log_det);
      check->RequireLe(RelativeError(log_det, NumericalJacobianLogDet(small, x), 1e-4), 1e-4,
                       "log-det vs numerical Jacobian, D=" + std::to_string(dim));
    }
  }

  // Densities normalize: quadrature over wide grids in one and two dims.
  {
    auto em = NmmEmission::Init(1, 2, 1, 0, 1, 0);
    em.log_weights()[0] = (Vector(2) << std::log(0.4), std::log(0.6)).finished();
    double integral = 0.0;
    const double step = 0.01;
    Vector v(1);
    for (double x = -9.0; x <= 9.0; x += step) {
      v[0] = x;
      integral += std::exp(LogSumExp(em.ComponentLogDensity(0, v))) * step;
    }
    check->Require(integral > 0.99 && integral < 1.01, "density normalization, D=1");
  }
  {
    auto flow2 = FlowGenerator::CreateStack(2, 2, 6, 31);
    RandomizeFlowParameters(&flow2, 32, 0.3);
    std::vector<Vector> weights{Vector::Zero(1)};
    std::vector<std::vector<FlowGenerator>> flows;
    flows.push_back({flow2});
    NmmEmission em(std::move(weights), std::move(flows));
    double integral = 0.0;
    const double step = 0.05;
    Vector v(2);
    for (double x = -10.0; x <= 10.0; x += step)
      for (double y = -10.0; y <= 10.0; y += step) {
        v[0] = x;
        v[1] = y;
        integral += std::exp(LogSumExp(em.ComponentLogDensity(0, v))) * step * step;
      }
    check->Require(integral > 0.99 && integral < 1.01, "density normalization, D=2");
  }
}

void Criterion2Gradients(Check* check) {
  auto em = NmmEmission::Init(1, 2, 4, 1, 4, 5);  // D=4, K=2, L=2
  for (int k = 0; k < 2; ++k) RandomizeFlowParameters(&em.flow(0, k), 50 + static_cast<uint64_t>(k), 0.3);

  Rng rng(6);
  Matrix frames(4, 4);
  for (int t = 0; t < 4; ++t) frames.row(t) = RandomVector(4, &rng).transpose();
  Matrix resp(4, 2);
  resp << 0.3, 0.7, 0.5, 0.5, 0.9, 0.1, 0.2, 0.8;
  WeightedBatchItem item;
  item.frames = &frames;
  item.responsibilities = {resp};
  std::vector<WeightedBatchItem> batch{item};

  Vector analytic;
  FlowLossAndGradients(em, batch, &analytic);

  Vector params;
  em.GetFlowParameters(&params);
  auto objective = [&](const Vector& p) {
    auto probe = em;
    probe.SetFlowParameters(p);
    double total = 0.0;
    for (int t = 0; t < 4; ++t) {
      const Vector x = frames.row(t).transpose();
      for (int k = 0; k < 2; ++k)
        total += resp(t, k) * probe.flow(0, k).LogDensity(x);
    }
    return total;
  };
  const Vector numeric = CentralDifferenceGradient(objective, params, 1e-5);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i)
    worst = std::max(worst, RelativeError(analytic[i], numeric[i]));
  check->RequireLe(worst, 1e-4, "max gradient relative error over " +
                                    std::to_string(analytic.size()) + " coordinates");
}

void Criterion3HmmOracle(Check* check) {
  Rng rng(7);
  std::uniform_int_distribution<int> states(1, 3), lengths(1, 5);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  double worst_rel = 0.0, worst_gamma = 0.0;
  for (int instance = 0; instance < 150; ++instance) {
    const int s = states(rng), t = lengths(rng);
    Vector q(s);
    for (int i = 0; i < s; ++i) q[i] = uniform(rng);
    q /= q.sum();
    Matrix a(s, s);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) a(i, j) = uniform(rng);
      a.row(i) /= a.row(i).sum();
    }
    Matrix log_b(t, s);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < s; ++j) log_b(i, j) = 2.0 * gauss(rng);
    const Vector log_q = q.array().log();
    const Matrix log_a = a.array().log();
    const auto tables = ForwardBackwardFromDensities(log_q, log_a, log_b);
    const double oracle = BruteForceLogLikelihood(log_q, log_a, log_b);
    worst_rel = std::max(worst_rel,
                         std::abs(tables.log_likelihood - oracle) / std::max(1.0, std::abs(oracle)));
    for (int i = 0; i < t; ++i)
      worst_gamma = std::max(worst_gamma, std::abs(tables.gamma.row(i).sum() - 1.0));
  }
  check->RequireLe(worst_rel, 1e-10, "forward-backward vs path enumeration, 150 instances");
  check->RequireLe(worst_gamma, 1e-8, "gamma row normalization");
}

HmmModel MakeTwoStateGenerator(double separation, double stddev) {
  HmmModel model;
  model.log_init = (Vector(2) << std::log(0.6), std::log(0.4)).finished();
  model.log_trans =
      (Matrix(2, 2) << std::log(0.8), std::log(0.2), std::log(0.3), std::log(0.7)).finished();
  std::vector<GmmEmission::State> st(2);
  for (int s = 0; s < 2; ++s) {
    st[static_cast<std::size_t>(s)].log_weights = Vector::Zero(1);
    st[static_cast<std::size_t>(s)].means =
        Matrix::Constant(1, 2, s == 0 ? -separation : separation);
    st[static_cast<std::size_t>(s)].log_vars = Matrix::Constant(1, 2, 2.0 * std::log(stddev));
  }
  model.emission = std::make_unique<GmmEmission>(std::move(st), 1e-6);
  return model;
}

std::vector<FeatureSequence> SampleDataset(const HmmModel& model, int count, int length,
                                           uint64_t seed) {
  std::vector<FeatureSequence> out;
  for (int i = 0; i < count; ++i)
    out.push_back(SampleSequence(model, length, DeriveSeed(seed, static_cast<uint64_t>(i))));
  return out;
}

void Criterion4EmMonotonicity(Check* check) {
  // GMM: exact EM must be non-decreasing on every recorded iteration.
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const HmmModel truth = MakeTwoStateGenerator(1.0, 0.8);
    const auto data = SampleDataset(truth, 30, 10, 1000 + seed);
    TrainConfig config;
    config.emission_kind = EmissionKind::kGmm;
    config.num_components = 2;
    config.num_states = 2;
    config.max_outer_iters = 12;
    config.rel_tol = 1e-12;
    config.seed = seed;
    const TrainResult result = TrainClassModel(data, config);
    check->Require(!result.log.diverged, "gmm run " + std::to_string(seed) + " stayed finite");
    for (std::size_t i = 1; i < result.log.rows.size(); ++i) {
      const double prev = result.log.rows[i - 1].log_likelihood;
      check->Require(result.log.rows[i].log_likelihood >= prev - 1e-8 * std::abs(prev),
                     "gmm monotonicity, seed " + std::to_string(seed) + ", iteration " +
                         std::to_string(i));
    }
  }

  // NMM: statistically monotone on the fixed seed.
  const HmmModel truth = MakeTwoStateGenerator(1.5, 0.6);
  auto data = SampleDataset(truth, 40, 10, 2024);
  for (auto& seq : data)
    for (Eigen::Index t = 0; t < seq.NumFrames(); ++t)
      seq.frames(t, 1) += 0.4 * seq.frames(t, 0) * seq.frames(t, 0);
  TrainConfig config;
  config.emission_kind = EmissionKind::kNmm;
  config.num_components = 2;
  config.num_states = 2;
  config.flow_blocks = 1;
  config.hidden_width = 8;
  config.max_flow_epochs = 2;
  config.max_outer_iters = 15;
  config.rel_tol = 1e-12;
  config.seed = 4;
  const TrainResult result = TrainClassModel(data, config);
  int up = 0, total = 0;
  for (std::size_t i = 1; i < result.log.rows.size(); ++i) {
    const double prev = result.log.rows[i - 1].log_likelihood;
    if (result.log.rows[i].log_likelihood >= prev - 1e-8 * std::abs(prev)) ++up;
    ++total;
  }
  check->Require(total >= 10, "nmm run produced enough iterations");
  check->Require(up >= static_cast<int>(std::ceil(0.9 * total)),
                 "nmm monotone iterations " + std::to_string(up) + "/" + std::to_string(total));
}

void Criterion5ParameterRecovery(Check* check) {
  const HmmModel truth = MakeTwoStateGenerator(2.0, 0.5);
  const auto data = SampleDataset(truth, 500, 12, 77);
  TrainConfig config;
  config.emission_kind = EmissionKind::kGmm;
  config.num_components = 1;
  config.num_states = 2;
  config.standardize = false;
  config.max_outer_iters = 30;
  config.seed = 8;
  const TrainResult result = TrainClassModel(data, config);
  const auto* gmm = dynamic_cast<const GmmEmission*>(result.model.emission.get());
  const Vector mean0 = gmm->states()[0].means.row(0).transpose();
  const Vector mean1 = gmm->states()[1].means.row(0).transpose();
  const Vector truth0 = Vector::Constant(2, -2.0), truth1 = Vector::Constant(2, 2.0);
  const double direct =
      std::max((mean0 - truth0).cwiseAbs().maxCoeff(), (mean1 - truth1).cwiseAbs().maxCoeff());
  const double swapped =
      std::max((mean0 - truth1).cwiseAbs().maxCoeff(), (mean1 - truth0).cwiseAbs().maxCoeff());
  check->RequireLe(std::min(direct, swapped), 0.1, "state-aligned mean recovery");
}

struct BenchArtifacts {
  std::vector<HmmModel> gmm_models;
  std::vector<HmmModel> nmm_models;
  std::vector<LabeledSequence> test;
  double gmm_accuracy = 0.0;
  double nmm_accuracy = 0.0;
};

BenchArtifacts TrainBenchFamilies(const SyntheticDataset& dataset, uint64_t seed, int jobs) {
  BenchArtifacts out;
  std::vector<ClassSequences> train_set;
  for (const auto& cls : dataset.classes) {
    train_set.push_back({cls.label, cls.train});
    for (const auto& seq : cls.test) out.test.push_back({seq, cls.label});
  }

  TrainConfig base;
  base.seed = seed;
  base.num_states = 3;
  base.max_outer_iters = 30;
  base.max_flow_epochs = 6;
  base.learning_rate = 3e-3;
  base.hidden_width = 16;
  base.batch_size = 64;

  TrainConfig gmm = base;
  gmm.emission_kind = EmissionKind::kGmm;
  gmm.num_components = 20;

  TrainConfig nmm = base;
  nmm.emission_kind = EmissionKind::kNmm;
  nmm.num_components = 3;
  nmm.flow_blocks = 4;

  for (auto& result : TrainAllClasses(train_set, gmm, jobs))
    out.gmm_models.push_back(std::move(result.model));
  for (auto& result : TrainAllClasses(train_set, nmm, jobs))
    out.nmm_models.push_back(std::move(result.model));

  EvalOptions options;
  options.jobs = jobs;
  out.gmm_accuracy = Evaluate(out.gmm_models, out.test, nullptr, options).Accuracy();
  out.nmm_accuracy = Evaluate(out.nmm_models, out.test, nullptr, options).Accuracy();
  return out;
}

void Criterion6SyntheticClassification(Check* check, BenchArtifacts* warped_out, int jobs) {
  const uint64_t kBenchSeed = 7;

  const auto separated = GenerateSyntheticDataset(MakeBenchmarkSpec(kBenchSeed, false));
  const BenchArtifacts easy = TrainBenchFamilies(separated, kBenchSeed, jobs);
  check->Require(easy.gmm_accuracy >= 95.0, "separated benchmark, GMM accuracy " +
                                                std::to_string(easy.gmm_accuracy) + "% >= 95%");
  check->Require(easy.nmm_accuracy >= 95.0, "separated benchmark, NMM accuracy " +
                                                std::to_string(easy.nmm_accuracy) + "% >= 95%");

  const auto warped = GenerateSyntheticDataset(MakeBenchmarkSpec(kBenchSeed, true));
  *warped_out = TrainBenchFamilies(warped, kBenchSeed, jobs);
  std::fprintf(stderr, "  [bench] warped: GMM %.1f%%, NMM %.1f%%\n", warped_out->gmm_accuracy,
               warped_out->nmm_accuracy);
  check->Require(warped_out->nmm_accuracy >= warped_out->gmm_accuracy + 5.0,
                 "warped benchmark margin: NMM " + std::to_string(warped_out->nmm_accuracy) +
                     "% vs GMM " + std::to_string(warped_out->gmm_accuracy) + "% (need >= 5 points)");
}

void Criterion7RobustnessTrend(Check* check, const BenchArtifacts& bench, int jobs) {
  const std::vector<double> snrs{25.0, 20.0, 15.0, 10.0};
  EvalOptions options;
  options.jobs = jobs;
  const uint64_t noise_seed = DeriveSeed(7, "featnoise");

  auto verify = [&](const std::vector<HmmModel>& models, const std::string& name) {
    const EvalReport report = FeatureNoiseSweep(models, bench.test, snrs, noise_seed, options);
    check->Require(report.rows.size() == 5, name + ": clean + four SNR rows");
    check->Require(report.rows[0].condition == "clean", name + ": clean row first");
    check->Require(report.rows[0].drop == 0.0, name + ": clean drop is zero");
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      check->Require(row.error.empty(), name + ": condition " + row.condition + " evaluated");
      check->Require(row.drop == report.rows[0].accuracy - row.accuracy,
                     name + ": exact drop arithmetic at " + row.condition);
      check->Require(row.accuracy <= report.rows[i - 1].accuracy + 1e-12,
                     name + ": accuracy non-increasing at " + row.condition + " (" +
                         std::to_string(row.accuracy) + "% after " +
                         std::to_string(report.rows[i - 1].accuracy) + "%)");
    }
    // Table-3 style rendering: drop in parentheses.
    const std::string text = RenderReportText(report);
    check->Require(text.find("(") != std::string::npos, name + ": drop-in-parentheses rendering");
    const EvalReport reparsed = ParseReportCsv(RenderReportCsv(report));
    check->Require(reparsed.rows.size() == report.rows.size(), name + ": csv round trip");
  };
  verify(bench.gmm_models, "gmm");
  verify(bench.nmm_models, "nmm");
}

void Criterion8FeaturePipeline(Check* check) {
  // Frame-count formula over a grid.
  for (int64_t n : {400, 401, 415, 560, 561, 1000, 3999, 16000}) {
    for (int w_ms : {10, 25}) {
      for (int s_ms : {5, 10}) {
        const int64_t w = 16LL * w_ms, s = 16LL * s_ms;
        if (n < w) continue;
        AudioBuffer buf;
        buf.sample_rate_hz = 16000;
        buf.samples.assign(static_cast<std::size_t>(n), 0.0);
        const auto frames = FrameSignal(buf, w_ms / 1000.0, s_ms / 1000.0);
        check->Require(static_cast<int64_t>(frames.size()) == (n - w) / s + 1,
                       "frame count at N=" + std::to_string(n));
      }
    }
  }

  // Output dimension 39.
  AudioBuffer second;
  second.sample_rate_hz = 16000;
  second.samples.assign(16000, 0.0);
  for (std::size_t i = 0; i < second.samples.size(); ++i)
    second.samples[i] = 0.4 * std::sin(2.0 * M_PI * 350.0 * static_cast<double>(i) / 16000.0);
  const FeatureConfig config;
  check->Require(ExtractFeatures(second, config).Dim() == 39, "39-dimensional output");

  // Measured SNR within 0.01 dB.
  const AudioBuffer clean = SynthNoise(NoiseKind::kPink, 8000, 5);
  const AudioBuffer noise = SynthNoise(NoiseKind::kWhite, 8000, 6);
  for (double snr : {25.0, 10.0, 0.0}) {
    const AudioBuffer mixed = MixNoise(clean, noise, snr, 9);
    double p_clean = 0.0, p_residual = 0.0;
    for (std::size_t i = 0; i < clean.samples.size(); ++i) {
      p_clean += clean.samples[i] * clean.samples[i];
      const double r = mixed.samples[i] - clean.samples[i];
      p_residual += r * r;
    }
    const double measured = 10.0 * std::log10(p_clean / p_residual);
    check->RequireLe(std::abs(measured - snr), 0.01, "measured SNR at " + std::to_string(snr));
  }

  // DCT orthonormality.
  const Matrix dct = DctMatrix(26, 26);
  check->RequireLe((dct * dct.transpose() - Matrix::Identity(26, 26)).cwiseAbs().maxCoeff(),
                   1e-10, "DCT orthonormality");
}

void Criterion9Determinism(Check* check) {
  if (g_cli_path.empty()) {
    check->Require(false, "CLI path not provided (--cli or $NMMHMM_CLI)");
    return;
  }
  const fs::path dir = g_work_dir / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // A small two-class audio dataset for cmd_train.
  const fs::path audio_dir = dir / "audio";
  fs::create_directories(audio_dir);
  std::ostringstream manifest;
  manifest << "audio_path,segment_start_sample,segment_end_sample,label,split\n";
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 6; ++i) {
      AudioBuffer buf;
      buf.sample_rate_hz = 16000;
      buf.samples.resize(4800);
      Rng rng(DeriveSeed(500, static_cast<uint64_t>(c), static_cast<uint64_t>(i)));
      std::normal_distribution<double> gauss;
      const double freq = c == 0 ? 600.0 : 2800.0;
      for (std::size_t n = 0; n < buf.samples.size(); ++n)
        buf.samples[n] = 0.4 * std::sin(2.0 * M_PI * freq * static_cast<double>(n) / 16000.0) +
                         0.02 * gauss(rng);
      const std::string name = "c" + std::to_string(c) + "_" + std::to_string(i) + ".wav";
      WriteWav((audio_dir / name).string(), buf);
      manifest << "audio/" << name << ",0,4800,class" << c << "," << (i < 5 ? "train" : "test")
               << "\n";
    }
  }
  std::ofstream(dir / "manifest.csv") << manifest.str();

  auto train_run = [&](const std::string& tag, int jobs) {
    const fs::path out = dir / ("train-" + tag);
    const std::string cmd = g_cli_path + " train --manifest " + (dir / "manifest.csv").string() +
                            " --cache-dir " + (dir / ("cache-" + tag)).string() + " --out-dir " +
                            out.string() +
                            " --emission nmm --K 2 --flow-blocks 1 --hidden-width 6"
                            " --num-states 3 --max-outer 4 --flow-epochs 2 --seed 11 --jobs " +
                            std::to_string(jobs) + " 2>/dev/null";
    if (RunCommand(cmd) != 0) throw std::runtime_error("cmd_train failed: " + cmd);
    return out;
  };
  const fs::path train_a = train_run("a", 1);
  const fs::path train_b = train_run("b", 1);
  const fs::path train_c = train_run("c", 4);
  for (const std::string label : {"class0", "class1"}) {
    const std::string bytes_a = ReadFileBytes(train_a / (label + ".model"));
    check->Require(bytes_a == ReadFileBytes(train_b / (label + ".model")),
                   "cmd_train rerun byte-identical: " + label);
    check->Require(bytes_a == ReadFileBytes(train_c / (label + ".model")),
                   "cmd_train --jobs 1 vs 4 byte-identical: " + label);
  }

  auto bench_run = [&](const std::string& tag, int jobs) {
    const fs::path out = dir / ("bench-" + tag);
    const std::string cmd = g_cli_path + " synth-bench --out-dir " + out.string() +
                            " --seed 5 --train-per-class 30 --test-per-class 20"
                            " --max-outer 4 --flow-epochs 2 --hidden-width 8 --gmm-K 4"
                            " --jobs " + std::to_string(jobs) + " >/dev/null 2>/dev/null";
    if (RunCommand(cmd) != 0) throw std::runtime_error("cmd_synth_bench failed: " + cmd);
    return out;
  };
  const fs::path bench_a = bench_run("a", 1);
  const fs::path bench_b = bench_run("b", 1);
  const fs::path bench_c = bench_run("c", 4);
  for (const std::string family : {"gmm", "nmm"}) {
    for (int c = 0; c < 3; ++c) {
      const std::string name = family + "_class" + std::to_string(c) + ".model";
      const std::string bytes_a = ReadFileBytes(bench_a / name);
      check->Require(bytes_a == ReadFileBytes(bench_b / name),
                     "cmd_synth_bench rerun byte-identical: " + name);
      check->Require(bytes_a == ReadFileBytes(bench_c / name),
                     "cmd_synth_bench --jobs 1 vs 4 byte-identical: " + name);
    }
  }
  check->Require(ReadFileBytes(bench_a / "side_by_side.txt") ==
                     ReadFileBytes(bench_b / "side_by_side.txt"),
                 "cmd_synth_bench report identical across runs");
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli") g_cli_path = argv[i + 1];
    if (arg == "--work-dir") g_work_dir = argv[i + 1];
  }
  if (g_cli_path.empty())
    if (const char* env = std::getenv("NMMHMM_CLI")) g_cli_path = env;
  if (g_work_dir.empty()) g_work_dir = fs::temp_directory_path() / "nmmhmm-acceptance";
  fs::create_directories(g_work_dir);

  const int jobs = 3;
  BenchArtifacts warped_bench;

  using Runner = std::function<void(Check*)>;
  const std::vector<std::pair<std::string, Runner>> criteria = {
      {"flow correctness (round trip, log-det, normalization)", Criterion1FlowCorrectness},
      {"flow gradients vs central differences", Criterion2Gradients},
      {"forward-backward vs brute-force enumeration", Criterion3HmmOracle},
      {"EM monotonicity (GMM exact, NMM statistical)", Criterion4EmMonotonicity},
      {"GMM parameter recovery", Criterion5ParameterRecovery},
      {"synthetic classification (separated + warped margin)",
       [&](Check* c) { Criterion6SyntheticClassification(c, &warped_bench, jobs); }},
      {"robustness trend under feature noise",
       [&](Check* c) { Criterion7RobustnessTrend(c, warped_bench, jobs); }},
      {"feature pipeline (framing, dimension, SNR, DCT)", Criterion8FeaturePipeline},
      {"CLI determinism (reruns and job counts)", Criterion9Determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      criteria[i].second(&check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start).count();
    if (check.failures.empty()) {
      std::printf("[PASS] criterion %zu: %s (%.1f s)\n", i + 1, criteria[i].first.c_str(),
                  seconds);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %zu: %s (%.1f s)\n", i + 1, criteria[i].first.c_str(),
                  seconds);
      for (const auto& what : check.failures) std::printf("       - %s\n", what.c_str());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
