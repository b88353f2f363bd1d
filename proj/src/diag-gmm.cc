// src/diag-gmm.cc

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

#include "nmmhmm/diag-gmm.h"

#include <cmath>
#include <stdexcept>

namespace nmmhmm {

namespace {
constexpr double kMinMass = 1e-10;
}

GmmEmission::GmmEmission(std::vector<State> states, double var_floor)
    : states_(std::move(states)), var_floor_(var_floor) {
  if (states_.empty()) throw std::invalid_argument("GmmEmission: no states");
  const double log_floor = std::log(var_floor_);
  for (auto& st : states_) {
    if (st.means.rows() != st.log_weights.size() || st.means.rows() != st.log_vars.rows() ||
        st.means.cols() != st.log_vars.cols())
      throw std::invalid_argument("GmmEmission: inconsistent state parameter shapes");
    st.log_vars = st.log_vars.cwiseMax(log_floor);
  }
}

Vector GmmEmission::ComponentLogDensity(int state, const Vector& x) const {
  const State& st = states_[static_cast<std::size_t>(state)];
  if (x.size() != st.means.cols()) throw std::invalid_argument("GmmEmission: dimension mismatch");
  const int k_max = static_cast<int>(st.log_weights.size());
  Vector out(k_max);
  for (int k = 0; k < k_max; ++k) {
    double acc = 0.0;
    for (Eigen::Index d = 0; d < x.size(); ++d) {
      const double log_var = st.log_vars(k, d);
      const double diff = x[d] - st.means(k, d);
      acc += kLog2Pi + log_var + diff * diff * std::exp(-log_var);
    }
    out[k] = st.log_weights[k] - 0.5 * acc;
  }
  return out;
}

Matrix GmmEmission::LogDensityMatrix(const Matrix& frames) const {
  const Eigen::Index t_max = frames.rows();
  Matrix out(t_max, NumStates());
  Vector comp;
  for (Eigen::Index t = 0; t < t_max; ++t) {
    const Vector x = frames.row(t).transpose();
    for (int s = 0; s < NumStates(); ++s) {
      comp = ComponentLogDensity(s, x);
      out(t, s) = LogSumExp(comp);
    }
  }
  return out;
}

Vector GmmEmission::Sample(int state, Rng* rng) const {
  const State& st = states_[static_cast<std::size_t>(state)];
  const int k = SampleCategoricalLog(st.log_weights, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(st.means.cols());
  for (Eigen::Index d = 0; d < x.size(); ++d)
    x[d] = st.means(k, d) + std::exp(0.5 * st.log_vars(k, d)) * gauss(*rng);
  return x;
}

std::unique_ptr<EmissionModel> GmmEmission::Clone() const {
  return std::make_unique<GmmEmission>(*this);
}

GmmEmission GmmEmission::Init(const Matrix& pooled_frames, int num_states, int num_components,
                              uint64_t seed, double var_floor) {
  if (pooled_frames.rows() < 1) throw std::invalid_argument("GmmEmission::Init: no frames");
  const Eigen::Index d = pooled_frames.cols();
  const Eigen::Index n = pooled_frames.rows();
  Vector mean = pooled_frames.colwise().mean().transpose();
  Vector var = (pooled_frames.rowwise() - mean.transpose()).array().square().colwise().mean();
  var = var.cwiseMax(var_floor);

  Rng rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  std::vector<State> states;
  states.reserve(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    State st;
    st.log_weights = Vector::Constant(num_components, -std::log(static_cast<double>(num_components)));
    st.means.resize(num_components, d);
    st.log_vars.resize(num_components, d);
    for (int k = 0; k < num_components; ++k) {
      st.means.row(k) = pooled_frames.row(pick(rng));
      st.log_vars.row(k) = var.array().log().transpose();
    }
    states.push_back(std::move(st));
  }
  return GmmEmission(std::move(states), var_floor);
}

GmmAccumulator::GmmAccumulator(int num_states, int num_components, int dim) {
  mass_.assign(static_cast<std::size_t>(num_states), Vector::Zero(num_components));
  sum_x_.assign(static_cast<std::size_t>(num_states), Matrix::Zero(num_components, dim));
  sum_sq_.assign(static_cast<std::size_t>(num_states), Matrix::Zero(num_components, dim));
}

void GmmAccumulator::Add(int state, const Vector& x, const Vector& gamma_sk) {
  auto& mass = mass_[static_cast<std::size_t>(state)];
  auto& sum_x = sum_x_[static_cast<std::size_t>(state)];
  auto& sum_sq = sum_sq_[static_cast<std::size_t>(state)];
  for (Eigen::Index k = 0; k < gamma_sk.size(); ++k) {
    const double g = gamma_sk[k];
    if (g == 0.0) continue;
    mass[k] += g;
    sum_x.row(k) += g * x.transpose();
    sum_sq.row(k) += g * x.array().square().matrix().transpose();
  }
}

void GmmAccumulator::ApplyMStep(GmmEmission* emission) const {
  const double floor = emission->var_floor();
  const double log_floor = std::log(floor);
  for (int s = 0; s < emission->NumStates(); ++s) {
    auto& st = emission->states()[static_cast<std::size_t>(s)];
    const Vector& mass = mass_[static_cast<std::size_t>(s)];
    const double total = mass.sum();
    if (total <= kMinMass) continue;  // state never visited: keep everything
    for (Eigen::Index k = 0; k < mass.size(); ++k) {
      st.log_weights[k] = mass[k] > 0.0 ? std::log(mass[k] / total) : kNegInf;
      if (mass[k] <= kMinMass) continue;  // component starved: keep mean/var
      const Vector mean = sum_x_[static_cast<std::size_t>(s)].row(k).transpose() / mass[k];
      Vector var = sum_sq_[static_cast<std::size_t>(s)].row(k).transpose() / mass[k] -
                   mean.cwiseProduct(mean);
      var = var.cwiseMax(floor);
      st.means.row(k) = mean.transpose();
      st.log_vars.row(k) = var.array().log().transpose().max(log_floor);
    }
  }
}

}  // namespace nmmhmm
