// nmmhmm/classifier.h

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

#ifndef NMMHMM_CLASSIFIER_H_
#define NMMHMM_CLASSIFIER_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "nmmhmm/audio.h"
#include "nmmhmm/hmm.h"
#include "nmmhmm/noise.h"

namespace nmmhmm {

struct LabeledSequence {
  FeatureSequence features;
  std::string label;
};

struct LabeledAudio {
  AudioBuffer audio;
  std::string label;
};

struct ClassifyResult {
  int best_index = -1;
  Vector log_likelihoods;  // one per model, in model order
};

// Maximum-likelihood classification over per-class models. Ties break to the
// lowest model index. When length_normalize is set, per-class scores are
// divided by the frame count before comparison. Throws if every score is
// non-finite.
ClassifyResult Classify(std::span<const HmmModel> models, const FeatureSequence& seq,
                        bool length_normalize = false);

struct EvalCounts {
  int64_t total = 0;
  int64_t correct = 0;
  double Accuracy() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
};

struct EvalOptions {
  bool length_normalize = false;
  int jobs = 1;
};

// Segment-classification accuracy (the paper task's 100 - PER%). Confusion
// counts are keyed (true label, predicted label). Every test label must name
// one of the models.
EvalCounts Evaluate(std::span<const HmmModel> models, std::span<const LabeledSequence> test,
                    std::map<std::pair<std::string, std::string>, int64_t>* confusion = nullptr,
                    const EvalOptions& options = {});

struct EvalRow {
  std::string condition;  // "clean" or "<kind>@<snr>dB"
  std::string kind;       // empty for clean
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  double accuracy = 0.0;
  double drop = 0.0;  // clean accuracy minus this row's accuracy, exact
  int64_t n_total = 0;
  int64_t n_correct = 0;
  std::string error;  // non-empty when the condition failed; not serialized
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

// Clean condition first, then one row per noise spec: corrupt the test
// audio, re-extract features and evaluate. A failing condition is recorded
// as an errored row and the sweep continues.
EvalReport NoiseSweep(std::span<const HmmModel> models, std::span<const LabeledAudio> test,
                      std::span<const NoiseSpec> specs, const FeatureConfig& feature_config,
                      const EvalOptions& options = {});

// Feature-space variant for synthetic benchmarks: additive Gaussian noise at
// each SNR, common random numbers across conditions.
EvalReport FeatureNoiseSweep(std::span<const HmmModel> models,
                             std::span<const LabeledSequence> test,
                             std::span<const double> snr_dbs, uint64_t seed,
                             const EvalOptions& options = {});

// Aligned table, accuracy to one decimal with the drop in parentheses.
std::string RenderReportText(const EvalReport& report);
// condition,kind,snr_db,accuracy,drop,n_total,n_correct with full precision.
std::string RenderReportCsv(const EvalReport& report);
EvalReport ParseReportCsv(const std::string& csv);

}  // namespace nmmhmm

#endif  // NMMHMM_CLASSIFIER_H_
