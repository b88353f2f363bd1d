// nmmhmm/diag-gmm.h

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

#ifndef NMMHMM_DIAG_GMM_H_
#define NMMHMM_DIAG_GMM_H_

#include <memory>
#include <vector>

#include "nmmhmm/emission.h"

namespace nmmhmm {

// Diagonal-covariance Gaussian mixture emission, one mixture per state.
class GmmEmission : public EmissionModel {
 public:
  struct State {
    Vector log_weights;  // K
    Matrix means;        // K x D
    Matrix log_vars;     // K x D
  };

  GmmEmission(std::vector<State> states, double var_floor = 1e-3);

  int NumStates() const override { return static_cast<int>(states_.size()); }
  int NumComponents() const override { return static_cast<int>(states_.front().log_weights.size()); }
  int Dim() const override { return static_cast<int>(states_.front().means.cols()); }
  std::string_view Kind() const override { return "gmm"; }

  Matrix LogDensityMatrix(const Matrix& frames) const override;
  Vector ComponentLogDensity(int state, const Vector& x) const override;
  Vector Sample(int state, Rng* rng) const override;
  std::unique_ptr<EmissionModel> Clone() const override;

  const std::vector<State>& states() const { return states_; }
  std::vector<State>& states() { return states_; }
  double var_floor() const { return var_floor_; }

  // Means drawn from random training frames, variances from the global
  // diagonal variance, uniform weights.
  static GmmEmission Init(const Matrix& pooled_frames, int num_states, int num_components,
                          uint64_t seed, double var_floor = 1e-3);

 private:
  std::vector<State> states_;
  double var_floor_;
};

// Responsibility-weighted sufficient statistics for the closed-form M-step.
class GmmAccumulator {
 public:
  GmmAccumulator(int num_states, int num_components, int dim);

  // gamma_sk holds the per-component responsibilities of frame x in `state`.
  void Add(int state, const Vector& x, const Vector& gamma_sk);

  // Weights proportional to mass, means and floored variances from weighted
  // moments. Components with (near) zero mass keep their previous
  // parameters. Returns the updated emission.
  void ApplyMStep(GmmEmission* emission) const;

  double mass(int state, int component) const { return mass_[state][component]; }

 private:
  std::vector<Vector> mass_;    // per state: K
  std::vector<Matrix> sum_x_;   // per state: K x D
  std::vector<Matrix> sum_sq_;  // per state: K x D
};

}  // namespace nmmhmm

#endif  // NMMHMM_DIAG_GMM_H_
