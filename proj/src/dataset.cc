// src/dataset.cc

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

#include "nmmhmm/dataset.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nmmhmm/audio.h"
#include "nmmhmm/model-io.h"

namespace fs = std::filesystem;

namespace nmmhmm {

namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void ManifestError(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string DatasetManifest::ResolvePath(const ManifestEntry& entry) const {
  fs::path p(entry.audio_path);
  if (p.is_absolute() || base_dir.empty()) return entry.audio_path;
  return (fs::path(base_dir) / p).string();
}

DatasetManifest LoadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  DatasetManifest manifest;
  manifest.base_dir = fs::path(path).parent_path().string();

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("empty manifest: " + path);
  ++line_no;
  if (Trim(line) != "audio_path,segment_start_sample,segment_end_sample,label,split")
    ManifestError(path, line_no, "bad header (expected audio_path,segment_start_sample,segment_end_sample,label,split)");

  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCsv(line);
    if (fields.size() != 5)
      ManifestError(path, line_no, "expected 5 fields, got " + std::to_string(fields.size()));
    ManifestEntry entry;
    entry.audio_path = Trim(fields[0]);
    try {
      entry.segment_start = std::stoll(Trim(fields[1]));
      entry.segment_end = std::stoll(Trim(fields[2]));
    } catch (const std::exception&) {
      ManifestError(path, line_no, "sample offsets must be integers");
    }
    entry.label = Trim(fields[3]);
    const std::string split = Trim(fields[4]);
    if (entry.audio_path.empty()) ManifestError(path, line_no, "empty audio path");
    if (entry.label.empty()) ManifestError(path, line_no, "empty label");
    if (entry.segment_start < 0 || entry.segment_start >= entry.segment_end)
      ManifestError(path, line_no, "requires 0 <= start < end");
    if (split == "train")
      entry.is_train = true;
    else if (split == "test")
      entry.is_train = false;
    else
      ManifestError(path, line_no, "unknown split token '" + split + "' (want train or test)");
    if (!fs::exists(manifest.ResolvePath(entry)))
      ManifestError(path, line_no, "audio file not found: " + manifest.ResolvePath(entry));
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

LabelFolding LoadLabelFolding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open folding map: " + path);
  LabelFolding folding;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("empty folding map: " + path);
  ++line_no;
  if (Trim(line) != "raw,folded")
    throw std::runtime_error(path + ":1: bad header (expected raw,folded)");
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCsv(line);
    if (fields.size() != 2)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 2 fields");
    folding[Trim(fields[0])] = Trim(fields[1]);
  }
  return folding;
}

DatasetManifest FoldLabels(const DatasetManifest& manifest, const LabelFolding& folding) {
  DatasetManifest out = manifest;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto it = folding.find(out.entries[i].label);
    if (it == folding.end())
      throw std::runtime_error("FoldLabels: unmapped label '" + out.entries[i].label +
                               "' at entry " + std::to_string(i));
    out.entries[i].label = it->second;
  }
  return out;
}

std::string CachePath(const std::string& cache_dir, const std::string& resolved_audio_path,
                      int64_t start, int64_t end, const FeatureConfig& config) {
  char key[512];
  const int n = std::snprintf(key, sizeof(key), "%s|%lld|%lld|%016llx",
                              resolved_audio_path.c_str(), static_cast<long long>(start),
                              static_cast<long long>(end),
                              static_cast<unsigned long long>(config.Fingerprint()));
  const uint64_t hash = Fnv1a64(std::string_view(key, static_cast<std::size_t>(n)));
  char name[128];
  std::snprintf(name, sizeof(name), "%s_%016llx.nmmf",
                fs::path(resolved_audio_path).stem().string().c_str(),
                static_cast<unsigned long long>(hash));
  return (fs::path(cache_dir) / name).string();
}

std::vector<ClassDataset> BuildClassDatasets(const DatasetManifest& manifest,
                                             const FeatureConfig& config,
                                             const std::string& cache_dir, ExtractStats* stats) {
  if (manifest.entries.empty()) throw std::runtime_error("BuildClassDatasets: empty manifest");
  fs::create_directories(cache_dir);

  std::map<std::string, ClassDataset> by_label;
  std::set<std::string> failed_labels;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    const std::string audio_path = manifest.ResolvePath(entry);
    const std::string cache_path =
        CachePath(cache_dir, audio_path, entry.segment_start, entry.segment_end, config);
    try {
      FeatureSequence seq;
      if (fs::exists(cache_path)) {
        seq = ReadFeatureCache(cache_path);
        if (stats != nullptr) ++stats->cache_hits;
      } else {
        const AudioBuffer audio =
            ReadWavSegment(audio_path, entry.segment_start, entry.segment_end);
        seq = ExtractFeatures(audio, config,
                              audio_path + ":" + std::to_string(entry.segment_start) + "-" +
                                  std::to_string(entry.segment_end));
        // The cache stores 32-bit floats; round now so warm-cache reruns see
        // bit-identical features.
        seq.frames = seq.frames.cast<float>().cast<double>();
        // Temp-then-rename so concurrent builders never see partial files.
        const std::string tmp = cache_path + ".tmp." + std::to_string(::getpid());
        WriteFeatureCache(tmp, seq);
        fs::rename(tmp, cache_path);
        if (stats != nullptr) ++stats->cache_misses;
      }
      seq.frame_shift_s = config.shift_s;
      auto& cls = by_label[entry.label];
      cls.label = entry.label;
      (entry.is_train ? cls.train : cls.test).push_back(std::move(seq));
    } catch (const std::exception& e) {
      failed_labels.insert(entry.label);
      if (stats != nullptr)
        stats->errors.push_back("entry " + std::to_string(i) + " (" + audio_path + "): " +
                                e.what());
    }
  }

  for (const auto& label : failed_labels)
    if (!by_label.count(label))
      throw std::runtime_error("BuildClassDatasets: every entry of class '" + label + "' failed");

  std::vector<ClassDataset> out;
  out.reserve(by_label.size());
  for (auto& [label, cls] : by_label) out.push_back(std::move(cls));
  return out;
}

}  // namespace nmmhmm
