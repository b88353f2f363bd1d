// nmmhmm/synthetic.h

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

#ifndef NMMHMM_SYNTHETIC_H_
#define NMMHMM_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nmmhmm/dataset.h"

namespace nmmhmm {

// Generator emission for one state: a Gaussian latent (optionally mixed
// through a square matrix for correlation) whose draw is pushed through the
// dataset-level warp.
struct SyntheticState {
  Vector mean;
  Vector stddev;
  Matrix mixing;  // empty for axis-aligned draws
};

struct SyntheticClassSpec {
  std::string label;
  Vector log_init;
  Matrix log_trans;
  std::vector<SyntheticState> states;
};

// kBanana chains a smooth volume-preserving bend through the coordinates:
// y[0] = z[0], y[d] = z[d] + strength * z[d-1]^2.
enum class WarpKind { kNone, kBanana };

struct SyntheticDatasetSpec {
  std::vector<SyntheticClassSpec> classes;
  int train_per_class = 100;
  int test_per_class = 50;
  int min_length = 8;
  int max_length = 16;
  WarpKind warp = WarpKind::kNone;
  double warp_strength = 0.0;
  uint64_t seed = 0;
};

struct SyntheticDataset {
  SyntheticDatasetSpec spec;  // the ground-truth generators
  std::vector<ClassDataset> classes;
};

Vector ApplyWarp(const Vector& z, WarpKind warp, double strength);

// Seeded and reproducible; per-class counts are exactly as configured and
// lengths are uniform over [min_length, max_length].
SyntheticDataset GenerateSyntheticDataset(const SyntheticDatasetSpec& spec);

// The fixed desk-scale benchmark: three 3-state classes in four dimensions.
// The separated variant has well-spread state means and no warp; the warped
// variant overlaps the class means, differs mainly in latent correlation
// structure, and bends every draw through the banana map.
SyntheticDatasetSpec MakeBenchmarkSpec(uint64_t seed, bool warped);

}  // namespace nmmhmm

#endif  // NMMHMM_SYNTHETIC_H_
