// nmmhmm/dataset.h

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

#ifndef NMMHMM_DATASET_H_
#define NMMHMM_DATASET_H_

#include <map>
#include <string>
#include <vector>

#include "nmmhmm/feature.h"

namespace nmmhmm {

struct ManifestEntry {
  std::string audio_path;
  int64_t segment_start = 0;  // samples, half-open range
  int64_t segment_end = 0;
  std::string label;
  bool is_train = true;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // relative audio paths resolve against this

  std::string ResolvePath(const ManifestEntry& entry) const;
};

// CSV with the header
// audio_path,segment_start_sample,segment_end_sample,label,split
// Parse and invariant violations name the offending line. Audio paths must
// resolve to existing files.
DatasetManifest LoadManifest(const std::string& path);

using LabelFolding = std::map<std::string, std::string>;

// Two-column CSV (header raw,folded).
LabelFolding LoadLabelFolding(const std::string& path);

// Replaces every label through the folding map; throws on an unmapped label.
DatasetManifest FoldLabels(const DatasetManifest& manifest, const LabelFolding& folding);

struct ClassDataset {
  std::string label;
  std::vector<FeatureSequence> train;
  std::vector<FeatureSequence> test;
};

struct ExtractStats {
  int64_t cache_hits = 0;
  int64_t cache_misses = 0;
  std::vector<std::string> errors;  // one message per failed entry
};

// Extracts (or loads from cache) features for every manifest entry and
// groups them per class, classes sorted by label. Cache files are keyed by
// (resolved path, segment, feature-config fingerprint) and written via
// temp-then-rename. Per-entry failures are collected in stats; a class whose
// every entry failed aborts the run.
std::vector<ClassDataset> BuildClassDatasets(const DatasetManifest& manifest,
                                             const FeatureConfig& config,
                                             const std::string& cache_dir, ExtractStats* stats);

// Cache file path for one entry under the given config.
std::string CachePath(const std::string& cache_dir, const std::string& resolved_audio_path,
                      int64_t start, int64_t end, const FeatureConfig& config);

}  // namespace nmmhmm

#endif  // NMMHMM_DATASET_H_
