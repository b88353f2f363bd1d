// src/emission.cc

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

#include "nmmhmm/emission.h"

#include <cmath>
#include <stdexcept>

namespace nmmhmm {

Matrix EmissionModel::LogDensityMatrix(const Matrix& frames) const {
  const Eigen::Index t_max = frames.rows();
  const int s_max = NumStates();
  Matrix out(t_max, s_max);
  for (Eigen::Index t = 0; t < t_max; ++t) {
    const Vector x = frames.row(t).transpose();
    for (int s = 0; s < s_max; ++s) out(t, s) = LogSumExp(ComponentLogDensity(s, x));
  }
  return out;
}

int SampleCategoricalLog(const Vector& log_probs, Rng* rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(*rng);
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < log_probs.size(); ++i) {
    cumulative += std::exp(log_probs[i]);
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(log_probs.size() - 1);
}

}  // namespace nmmhmm
