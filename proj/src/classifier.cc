// src/classifier.cc

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

#include "nmmhmm/classifier.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nmmhmm/feature.h"

namespace nmmhmm {

namespace {

std::string FormatCondition(const std::string& kind, double snr_db) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s@%gdB", kind.c_str(), snr_db);
  return buf;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

ClassifyResult Classify(std::span<const HmmModel> models, const FeatureSequence& seq,
                        bool length_normalize) {
  if (models.empty()) throw std::invalid_argument("Classify: no models");
  ClassifyResult result;
  result.log_likelihoods.resize(static_cast<Eigen::Index>(models.size()));
  for (std::size_t c = 0; c < models.size(); ++c) {
    double score;
    try {
      score = SequenceLogLikelihood(models[c], seq);
    } catch (const std::exception&) {
      score = kNegInf;
    }
    if (length_normalize && seq.NumFrames() > 0)
      score /= static_cast<double>(seq.NumFrames());
    result.log_likelihoods[static_cast<Eigen::Index>(c)] = score;
  }
  for (Eigen::Index c = 0; c < result.log_likelihoods.size(); ++c) {
    if (!std::isfinite(result.log_likelihoods[c])) continue;
    if (result.best_index < 0 ||
        result.log_likelihoods[c] > result.log_likelihoods[result.best_index])
      result.best_index = static_cast<int>(c);
  }
  if (result.best_index < 0)
    throw std::runtime_error("Classify: every class log-likelihood is non-finite");
  return result;
}

EvalCounts Evaluate(std::span<const HmmModel> models, std::span<const LabeledSequence> test,
                    std::map<std::pair<std::string, std::string>, int64_t>* confusion,
                    const EvalOptions& options) {
  if (test.empty()) throw std::invalid_argument("Evaluate: empty test set");
  std::set<std::string> known;
  for (const auto& m : models) known.insert(m.label);
  for (const auto& item : test)
    if (!known.count(item.label))
      throw std::runtime_error("Evaluate: test label '" + item.label +
                               "' has no corresponding model");

  std::vector<int> predicted(test.size());
  ParallelFor(static_cast<int>(test.size()), options.jobs, [&](int i) {
    predicted[static_cast<std::size_t>(i)] =
        Classify(models, test[static_cast<std::size_t>(i)].features, options.length_normalize)
            .best_index;
  });

  EvalCounts counts;
  counts.total = static_cast<int64_t>(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::string& truth = test[i].label;
    const std::string& guess = models[static_cast<std::size_t>(predicted[i])].label;
    if (truth == guess) ++counts.correct;
    if (confusion != nullptr) ++(*confusion)[{truth, guess}];
  }
  return counts;
}

EvalReport NoiseSweep(std::span<const HmmModel> models, std::span<const LabeledAudio> test,
                      std::span<const NoiseSpec> specs, const FeatureConfig& feature_config,
                      const EvalOptions& options) {
  if (test.empty()) throw std::invalid_argument("NoiseSweep: empty test set");
  EvalReport report;

  auto evaluate_features = [&](const std::vector<LabeledSequence>& feats) {
    return Evaluate(models, feats, nullptr, options);
  };

  std::vector<LabeledSequence> clean_feats(test.size());
  ParallelFor(static_cast<int>(test.size()), options.jobs, [&](int i) {
    const auto& item = test[static_cast<std::size_t>(i)];
    clean_feats[static_cast<std::size_t>(i)] = {
        ExtractFeatures(item.audio, feature_config, "clean:" + std::to_string(i)), item.label};
  });
  const EvalCounts clean = evaluate_features(clean_feats);
  report.rows.push_back({"clean", "", std::numeric_limits<double>::quiet_NaN(), clean.Accuracy(),
                         0.0, clean.total, clean.correct, ""});

  for (std::size_t n = 0; n < specs.size(); ++n) {
    const NoiseSpec& spec = specs[n];
    EvalRow row;
    row.condition = FormatCondition(spec.name, spec.snr_db);
    row.kind = spec.name;
    row.snr_db = spec.snr_db;
    try {
      std::vector<LabeledSequence> noisy(test.size());
      ParallelFor(static_cast<int>(test.size()), options.jobs, [&](int i) {
        const auto& item = test[static_cast<std::size_t>(i)];
        NoiseSpec per_segment = spec;
        per_segment.offset_seed =
            DeriveSeed(spec.offset_seed, static_cast<uint64_t>(n), static_cast<uint64_t>(i));
        const AudioBuffer corrupted = MixNoise(item.audio, per_segment);
        noisy[static_cast<std::size_t>(i)] = {
            ExtractFeatures(corrupted, feature_config, row.condition + ":" + std::to_string(i)),
            item.label};
      });
      const EvalCounts counts = evaluate_features(noisy);
      row.accuracy = counts.Accuracy();
      row.drop = clean.Accuracy() - counts.Accuracy();
      row.n_total = counts.total;
      row.n_correct = counts.correct;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvalReport FeatureNoiseSweep(std::span<const HmmModel> models,
                             std::span<const LabeledSequence> test,
                             std::span<const double> snr_dbs, uint64_t seed,
                             const EvalOptions& options) {
  if (test.empty()) throw std::invalid_argument("FeatureNoiseSweep: empty test set");
  EvalReport report;
  const EvalCounts clean = Evaluate(models, test, nullptr, options);
  report.rows.push_back({"clean", "", std::numeric_limits<double>::quiet_NaN(), clean.Accuracy(),
                         0.0, clean.total, clean.correct, ""});
  for (double snr : snr_dbs) {
    EvalRow row;
    row.condition = FormatCondition("feature-gauss", snr);
    row.kind = "feature-gauss";
    row.snr_db = snr;
    try {
      std::vector<LabeledSequence> noisy(test.size());
      ParallelFor(static_cast<int>(test.size()), options.jobs, [&](int i) {
        const auto& item = test[static_cast<std::size_t>(i)];
        // Seed depends only on the sequence so SNR conditions share a draw.
        noisy[static_cast<std::size_t>(i)] = {
            FeatureSequence{AddFeatureNoise(item.features.frames, snr,
                                            DeriveSeed(seed, static_cast<uint64_t>(i))),
                            item.features.frame_shift_s, item.features.source_id},
            item.label};
      });
      const EvalCounts counts = Evaluate(models, noisy, nullptr, options);
      row.accuracy = counts.Accuracy();
      row.drop = clean.Accuracy() - counts.Accuracy();
      row.n_total = counts.total;
      row.n_correct = counts.correct;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string RenderReportText(const EvalReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-24s %-14s %8s %12s %10s\n", "condition", "kind", "snr_db",
                "accuracy", "n");
  out << buf;
  for (const auto& row : report.rows) {
    if (!row.error.empty()) {
      std::snprintf(buf, sizeof(buf), "%-24s %-14s %8s %12s   ERROR: %s\n", row.condition.c_str(),
                    row.kind.c_str(), "-", "-", row.error.c_str());
      out << buf;
      continue;
    }
    char snr[32];
    if (std::isnan(row.snr_db))
      std::snprintf(snr, sizeof(snr), "-");
    else
      std::snprintf(snr, sizeof(snr), "%g", row.snr_db);
    char cell[48];
    if (row.condition == "clean")
      std::snprintf(cell, sizeof(cell), "%.1f", row.accuracy);
    else
      std::snprintf(cell, sizeof(cell), "%.1f (%.1f)", row.accuracy, row.drop);
    std::snprintf(buf, sizeof(buf), "%-24s %-14s %8s %12s %10lld\n", row.condition.c_str(),
                  row.kind.c_str(), snr, cell, static_cast<long long>(row.n_total));
    out << buf;
  }
  return out.str();
}

std::string RenderReportCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "condition,kind,snr_db,accuracy,drop,n_total,n_correct\n";
  char buf[256];
  for (const auto& row : report.rows) {
    char snr[40] = "";
    if (!std::isnan(row.snr_db)) std::snprintf(snr, sizeof(snr), "%.17g", row.snr_db);
    if (row.error.empty()) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.17g,%.17g,%lld,%lld\n", row.condition.c_str(),
                    row.kind.c_str(), snr, row.accuracy, row.drop,
                    static_cast<long long>(row.n_total), static_cast<long long>(row.n_correct));
    } else {
      std::snprintf(buf, sizeof(buf), "%s,%s,%s,,,0,0\n", row.condition.c_str(), row.kind.c_str(),
                    snr);
    }
    out << buf;
  }
  return out.str();
}

EvalReport ParseReportCsv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("condition,", 0) != 0)
    throw std::runtime_error("ParseReportCsv: missing header");
  EvalReport report;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitCsvLine(line);
    if (fields.size() != 7)
      throw std::runtime_error("ParseReportCsv: line " + std::to_string(line_no) +
                               ": expected 7 fields, got " + std::to_string(fields.size()));
    EvalRow row;
    row.condition = fields[0];
    row.kind = fields[1];
    row.snr_db = fields[2].empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : std::stod(fields[2]);
    if (fields[3].empty()) {
      row.error = "errored condition";
    } else {
      row.accuracy = std::stod(fields[3]);
      row.drop = std::stod(fields[4]);
    }
    row.n_total = std::stoll(fields[5]);
    row.n_correct = std::stoll(fields[6]);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace nmmhmm
