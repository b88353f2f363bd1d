// src/adam.cc

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

#include "nmmhmm/adam.h"

#include <cmath>
#include <stdexcept>

namespace nmmhmm {

void AdamStep(Vector* params, const Vector& gradient, AdamState* state, const AdamConfig& config) {
  if (params->size() != gradient.size() || params->size() != state->first_moment.size())
    throw std::invalid_argument("AdamStep: shape mismatch");
  if (config.learning_rate <= 0.0) throw std::invalid_argument("AdamStep: learning rate must be > 0");
  state->step += 1;
  state->first_moment = config.beta1 * state->first_moment + (1.0 - config.beta1) * gradient;
  state->second_moment = config.beta2 * state->second_moment.array().matrix() +
                         (1.0 - config.beta2) * gradient.array().square().matrix();
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state->step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state->step));
  const auto m_hat = state->first_moment.array() / bias1;
  const auto v_hat = state->second_moment.array() / bias2;
  params->array() += config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
}

void ClipByGlobalNorm(Vector* gradient, double max_norm) {
  if (max_norm <= 0.0) return;
  const double norm = gradient->norm();
  if (norm > max_norm) *gradient *= max_norm / norm;
}

}  // namespace nmmhmm
