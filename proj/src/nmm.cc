// src/nmm.cc

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

#include "nmmhmm/nmm.h"

#include <cmath>
#include <stdexcept>

namespace nmmhmm {

NmmEmission::NmmEmission(std::vector<Vector> log_weights,
                         std::vector<std::vector<FlowGenerator>> flows)
    : log_weights_(std::move(log_weights)), flows_(std::move(flows)) {
  if (flows_.empty() || flows_.front().empty())
    throw std::invalid_argument("NmmEmission: need at least one state and component");
  if (log_weights_.size() != flows_.size())
    throw std::invalid_argument("NmmEmission: weight/flow state count mismatch");
  dim_ = flows_.front().front().Dim();
  for (std::size_t s = 0; s < flows_.size(); ++s) {
    if (log_weights_[s].size() != static_cast<Eigen::Index>(flows_[s].size()))
      throw std::invalid_argument("NmmEmission: weight/flow component count mismatch");
    for (const auto& f : flows_[s])
      if (f.Dim() != dim_) throw std::invalid_argument("NmmEmission: flow dimension mismatch");
  }
}

Vector NmmEmission::ComponentLogDensity(int state, const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("NmmEmission: dimension mismatch");
  const auto& state_flows = flows_[static_cast<std::size_t>(state)];
  const Vector& lw = log_weights_[static_cast<std::size_t>(state)];
  Vector out(static_cast<Eigen::Index>(state_flows.size()));
  for (std::size_t k = 0; k < state_flows.size(); ++k)
    out[static_cast<Eigen::Index>(k)] = lw[static_cast<Eigen::Index>(k)] +
                                        state_flows[k].LogDensity(x);
  return out;
}

Vector NmmEmission::Sample(int state, Rng* rng) const {
  const int k = SampleCategoricalLog(log_weights_[static_cast<std::size_t>(state)], rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector z(dim_);
  for (int d = 0; d < dim_; ++d) z[d] = gauss(*rng);
  return flows_[static_cast<std::size_t>(state)][static_cast<std::size_t>(k)].Forward(z);
}

std::unique_ptr<EmissionModel> NmmEmission::Clone() const {
  return std::make_unique<NmmEmission>(*this);
}

std::size_t NmmEmission::FlowParameterCount() const {
  std::size_t n = 0;
  for (const auto& state_flows : flows_)
    for (const auto& f : state_flows) n += f.ParameterCount();
  return n;
}

void NmmEmission::GetFlowParameters(Vector* out) const {
  out->resize(static_cast<Eigen::Index>(FlowParameterCount()));
  std::size_t off = 0;
  for (const auto& state_flows : flows_)
    for (const auto& f : state_flows) {
      f.GetParameters(std::span<double>(out->data() + off, f.ParameterCount()));
      off += f.ParameterCount();
    }
}

void NmmEmission::SetFlowParameters(const Vector& in) {
  if (in.size() != static_cast<Eigen::Index>(FlowParameterCount()))
    throw std::invalid_argument("NmmEmission::SetFlowParameters: size mismatch");
  std::size_t off = 0;
  for (auto& state_flows : flows_)
    for (auto& f : state_flows) {
      f.SetParameters(std::span<const double>(in.data() + off, f.ParameterCount()));
      off += f.ParameterCount();
    }
}

NmmEmission NmmEmission::Init(int num_states, int num_components, int dim, int flow_blocks,
                              int hidden, uint64_t seed) {
  std::vector<Vector> weights;
  std::vector<std::vector<FlowGenerator>> flows;
  for (int s = 0; s < num_states; ++s) {
    weights.push_back(
        Vector::Constant(num_components, -std::log(static_cast<double>(num_components))));
    std::vector<FlowGenerator> state_flows;
    for (int k = 0; k < num_components; ++k)
      state_flows.push_back(FlowGenerator::CreateStack(
          dim, flow_blocks, hidden,
          DeriveSeed(seed, static_cast<uint64_t>(s), static_cast<uint64_t>(k))));
    flows.push_back(std::move(state_flows));
  }
  return NmmEmission(std::move(weights), std::move(flows));
}

double FlowLossAndGradients(const NmmEmission& emission, std::span<const WeightedBatchItem> batch,
                            Vector* gradient) {
  if (batch.empty()) throw std::invalid_argument("FlowLossAndGradients: empty batch");
  const int s_max = emission.NumStates();
  const int k_max = emission.NumComponents();
  gradient->setZero(static_cast<Eigen::Index>(emission.FlowParameterCount()));

  // Per-flow offsets into the flat gradient, in (state, component) order.
  std::vector<std::size_t> offsets(static_cast<std::size_t>(s_max * k_max));
  std::size_t off = 0;
  for (int s = 0; s < s_max; ++s)
    for (int k = 0; k < k_max; ++k) {
      offsets[static_cast<std::size_t>(s * k_max + k)] = off;
      off += emission.flow(s, k).ParameterCount();
    }

  double loss = 0.0;
  for (std::size_t item_idx = 0; item_idx < batch.size(); ++item_idx) {
    const auto& item = batch[item_idx];
    const Matrix& frames = *item.frames;
    if (static_cast<int>(item.responsibilities.size()) != s_max)
      throw std::invalid_argument("FlowLossAndGradients: responsibility state count mismatch");
    for (int s = 0; s < s_max; ++s) {
      const Matrix& resp = item.responsibilities[static_cast<std::size_t>(s)];
      if (resp.rows() != frames.rows() || resp.cols() != k_max)
        throw std::invalid_argument("FlowLossAndGradients: responsibility shape mismatch");
      for (Eigen::Index t = 0; t < frames.rows(); ++t) {
        const Vector x = frames.row(t).transpose();
        for (int k = 0; k < k_max; ++k) {
          const double w = resp(t, k);
          if (w == 0.0) continue;
          const auto& f = emission.flow(s, k);
          const std::size_t o = offsets[static_cast<std::size_t>(s * k_max + k)];
          loss += f.LogDensityWithGradient(
              x, w, std::span<double>(gradient->data() + o, f.ParameterCount()));
        }
        if (!std::isfinite(loss))
          throw std::runtime_error("FlowLossAndGradients: non-finite loss at batch item " +
                                   std::to_string(item_idx) + ", frame " + std::to_string(t));
      }
    }
  }
  return loss;
}

std::vector<Vector> UpdateMixtureWeights(const Matrix& mass,
                                         const std::vector<Vector>& previous_log_weights) {
  if (mass.rows() != static_cast<Eigen::Index>(previous_log_weights.size()))
    throw std::invalid_argument("UpdateMixtureWeights: state count mismatch");
  std::vector<Vector> out = previous_log_weights;
  for (Eigen::Index s = 0; s < mass.rows(); ++s) {
    const double total = mass.row(s).sum();
    if (total <= 0.0) continue;
    for (Eigen::Index k = 0; k < mass.cols(); ++k)
      out[static_cast<std::size_t>(s)][k] =
          mass(s, k) > 0.0 ? std::log(mass(s, k) / total) : kNegInf;
  }
  return out;
}

}  // namespace nmmhmm
