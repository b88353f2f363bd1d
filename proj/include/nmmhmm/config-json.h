// nmmhmm/config-json.h

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

#ifndef NMMHMM_CONFIG_JSON_H_
#define NMMHMM_CONFIG_JSON_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "nmmhmm/feature.h"
#include "nmmhmm/noise.h"
#include "nmmhmm/trainer.h"

namespace nmmhmm {

// All parsers reject unknown keys so a typo in a run config fails before any
// work starts.

FeatureConfig FeatureConfigFromJson(const nlohmann::json& j);
nlohmann::json FeatureConfigToJson(const FeatureConfig& config);

TrainConfig TrainConfigFromJson(const nlohmann::json& j);
nlohmann::json TrainConfigToJson(const TrainConfig& config);

// Array of {name, source ("white" | "pink" | audio path), snr_db (number or
// array), seed}; one spec per (source, snr) pair.
std::vector<NoiseSpec> NoiseSpecsFromJson(const nlohmann::json& j);

nlohmann::json LoadJsonFile(const std::string& path);

}  // namespace nmmhmm

#endif  // NMMHMM_CONFIG_JSON_H_
