// nmmhmm/adam.h

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

#ifndef NMMHMM_ADAM_H_
#define NMMHMM_ADAM_H_

#include <cstdint>

#include "nmmhmm/common.h"

namespace nmmhmm {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Vector first_moment;
  Vector second_moment;
  int64_t step = 0;

  explicit AdamState(Eigen::Index size = 0)
      : first_moment(Vector::Zero(size)), second_moment(Vector::Zero(size)) {}
};

// Bias-corrected Adam step in the ASCENT direction:
// params += lr * m_hat / (sqrt(v_hat) + eps).
void AdamStep(Vector* params, const Vector& gradient, AdamState* state, const AdamConfig& config);

// Scales the gradient so its L2 norm is at most max_norm (no-op when
// max_norm <= 0).
void ClipByGlobalNorm(Vector* gradient, double max_norm);

}  // namespace nmmhmm

#endif  // NMMHMM_ADAM_H_
