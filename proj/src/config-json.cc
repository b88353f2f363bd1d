// src/config-json.cc

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

#include "nmmhmm/config-json.h"

#include <fstream>
#include <set>
#include <stdexcept>

namespace nmmhmm {

namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw std::runtime_error(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw std::runtime_error(std::string(what) + ": unknown key '" + key + "'");
}

}  // namespace

json LoadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return j;
}

FeatureConfig FeatureConfigFromJson(const json& j) {
  static const std::set<std::string> known = {
      "sample_rate_hz", "window_s",     "shift_s",   "preemphasis",  "num_mel_bins", "num_ceps",
      "low_freq_hz",    "high_freq_hz", "log_floor", "delta_window", "deltas"};
  RejectUnknownKeys(j, known, "feature config");
  FeatureConfig c;
  c.sample_rate_hz = j.value("sample_rate_hz", c.sample_rate_hz);
  c.window_s = j.value("window_s", c.window_s);
  c.shift_s = j.value("shift_s", c.shift_s);
  c.preemphasis = j.value("preemphasis", c.preemphasis);
  c.num_mel_bins = j.value("num_mel_bins", c.num_mel_bins);
  c.num_ceps = j.value("num_ceps", c.num_ceps);
  c.low_freq_hz = j.value("low_freq_hz", c.low_freq_hz);
  c.high_freq_hz = j.value("high_freq_hz", c.high_freq_hz);
  c.log_floor = j.value("log_floor", c.log_floor);
  c.delta_window = j.value("delta_window", c.delta_window);
  c.deltas = j.value("deltas", c.deltas);
  if (c.sample_rate_hz < 1 || c.window_s <= 0 || c.shift_s <= 0 || c.num_mel_bins < 1 ||
      c.num_ceps < 1 || c.delta_window < 1)
    throw std::runtime_error("feature config: out-of-range value");
  return c;
}

json FeatureConfigToJson(const FeatureConfig& c) {
  return json{{"sample_rate_hz", c.sample_rate_hz},
              {"window_s", c.window_s},
              {"shift_s", c.shift_s},
              {"preemphasis", c.preemphasis},
              {"num_mel_bins", c.num_mel_bins},
              {"num_ceps", c.num_ceps},
              {"low_freq_hz", c.low_freq_hz},
              {"high_freq_hz", c.high_freq_hz},
              {"log_floor", c.log_floor},
              {"delta_window", c.delta_window},
              {"deltas", c.deltas}};
}

TrainConfig TrainConfigFromJson(const json& j) {
  static const std::set<std::string> known = {
      "emission",      "K",           "flow_blocks",     "hidden_width",  "learning_rate",
      "adam_beta1",    "adam_beta2",  "adam_epsilon",    "grad_clip_norm", "batch_size",
      "max_flow_epochs", "max_outer_iters", "rel_tol",   "seed",          "state_divisor",
      "num_states",    "standardize", "var_floor",       "self_loop_prob"};
  RejectUnknownKeys(j, known, "train config");
  TrainConfig c;
  if (j.contains("emission")) {
    const std::string kind = j.at("emission").get<std::string>();
    if (kind == "gmm")
      c.emission_kind = EmissionKind::kGmm;
    else if (kind == "nmm")
      c.emission_kind = EmissionKind::kNmm;
    else
      throw std::runtime_error("train config: emission must be 'gmm' or 'nmm'");
  }
  c.num_components = j.value("K", c.num_components);
  c.flow_blocks = j.value("flow_blocks", c.flow_blocks);
  c.hidden_width = j.value("hidden_width", c.hidden_width);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.adam_epsilon = j.value("adam_epsilon", c.adam_epsilon);
  c.grad_clip_norm = j.value("grad_clip_norm", c.grad_clip_norm);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.max_flow_epochs = j.value("max_flow_epochs", c.max_flow_epochs);
  c.max_outer_iters = j.value("max_outer_iters", c.max_outer_iters);
  c.rel_tol = j.value("rel_tol", c.rel_tol);
  c.seed = j.value("seed", c.seed);
  c.state_divisor = j.value("state_divisor", c.state_divisor);
  c.num_states = j.value("num_states", c.num_states);
  c.standardize = j.value("standardize", c.standardize);
  c.var_floor = j.value("var_floor", c.var_floor);
  c.self_loop_prob = j.value("self_loop_prob", c.self_loop_prob);
  c.Validate();
  return c;
}

json TrainConfigToJson(const TrainConfig& c) {
  return json{{"emission", c.emission_kind == EmissionKind::kNmm ? "nmm" : "gmm"},
              {"K", c.num_components},
              {"flow_blocks", c.flow_blocks},
              {"hidden_width", c.hidden_width},
              {"learning_rate", c.learning_rate},
              {"adam_beta1", c.adam_beta1},
              {"adam_beta2", c.adam_beta2},
              {"adam_epsilon", c.adam_epsilon},
              {"grad_clip_norm", c.grad_clip_norm},
              {"batch_size", c.batch_size},
              {"max_flow_epochs", c.max_flow_epochs},
              {"max_outer_iters", c.max_outer_iters},
              {"rel_tol", c.rel_tol},
              {"seed", c.seed},
              {"state_divisor", c.state_divisor},
              {"num_states", c.num_states},
              {"standardize", c.standardize},
              {"var_floor", c.var_floor},
              {"self_loop_prob", c.self_loop_prob}};
}

std::vector<NoiseSpec> NoiseSpecsFromJson(const json& j) {
  if (!j.is_array()) throw std::runtime_error("noise config: expected a JSON array");
  std::vector<NoiseSpec> specs;
  for (const auto& item : j) {
    static const std::set<std::string> known = {"name", "source", "snr_db", "seed"};
    RejectUnknownKeys(item, known, "noise spec");
    NoiseSpec base;
    const std::string source = item.at("source").get<std::string>();
    if (source == "white") {
      base.kind = NoiseKind::kWhite;
    } else if (source == "pink") {
      base.kind = NoiseKind::kPink;
    } else {
      base.kind = NoiseKind::kFile;
      base.path = source;
    }
    base.name = item.value("name", source == "white" || source == "pink" ? source : "file");
    base.offset_seed = item.value("seed", 0ULL);
    const auto& snr = item.at("snr_db");
    if (snr.is_array()) {
      for (const auto& v : snr) {
        NoiseSpec spec = base;
        spec.snr_db = v.get<double>();
        specs.push_back(std::move(spec));
      }
    } else {
      base.snr_db = snr.get<double>();
      specs.push_back(std::move(base));
    }
  }
  return specs;
}

}  // namespace nmmhmm
