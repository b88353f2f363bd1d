// nmmhmm/model-io.h

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

#ifndef NMMHMM_MODEL_IO_H_
#define NMMHMM_MODEL_IO_H_

#include <string>

#include "nmmhmm/feature.h"
#include "nmmhmm/hmm.h"

namespace nmmhmm {

// Feature cache file: magic "NMMF", u16 version, u32 T, u32 D, then T*D
// row-major little-endian 32-bit floats.
void WriteFeatureCache(const std::string& path, const FeatureSequence& seq);
FeatureSequence ReadFeatureCache(const std::string& path);

// Versioned little-endian model file with named sections (header, initial
// and transition distributions, standardization statistics, emission
// parameters). Floating-point payloads round-trip bit-exactly.
void SaveModel(const std::string& path, const HmmModel& model);
HmmModel LoadModel(const std::string& path);

// Serialized model bytes, used by determinism checks.
std::string ModelToBytes(const HmmModel& model);

}  // namespace nmmhmm

#endif  // NMMHMM_MODEL_IO_H_
