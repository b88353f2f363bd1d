// nmmhmm/nmm.h

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

#ifndef NMMHMM_NMM_H_
#define NMMHMM_NMM_H_

#include <memory>
#include <span>
#include <vector>

#include "nmmhmm/emission.h"
#include "nmmhmm/flow.h"

namespace nmmhmm {

// Normalizing-flow mixture emission: per state, K weighted coupling-layer
// stacks with a standard-normal latent prior. Densities are exact via the
// change of variables.
class NmmEmission : public EmissionModel {
 public:
  NmmEmission(std::vector<Vector> log_weights, std::vector<std::vector<FlowGenerator>> flows);

  int NumStates() const override { return static_cast<int>(flows_.size()); }
  int NumComponents() const override { return static_cast<int>(flows_.front().size()); }
  int Dim() const override { return dim_; }
  std::string_view Kind() const override { return "nmm"; }

  Vector ComponentLogDensity(int state, const Vector& x) const override;
  Vector Sample(int state, Rng* rng) const override;
  std::unique_ptr<EmissionModel> Clone() const override;

  const std::vector<Vector>& log_weights() const { return log_weights_; }
  std::vector<Vector>& log_weights() { return log_weights_; }
  const FlowGenerator& flow(int state, int component) const {
    return flows_[static_cast<std::size_t>(state)][static_cast<std::size_t>(component)];
  }
  FlowGenerator& flow(int state, int component) {
    return flows_[static_cast<std::size_t>(state)][static_cast<std::size_t>(component)];
  }

  // Concatenated coupling-net parameters over (state, component), the
  // quantity the gradient M-step optimizes.
  std::size_t FlowParameterCount() const;
  void GetFlowParameters(Vector* out) const;
  void SetFlowParameters(const Vector& in);

  // Uniform weights, identity-initialized flows with per-(state, component)
  // seeded hidden layers.
  static NmmEmission Init(int num_states, int num_components, int dim, int flow_blocks,
                          int hidden, uint64_t seed);

 private:
  int dim_;
  std::vector<Vector> log_weights_;               // per state: K
  std::vector<std::vector<FlowGenerator>> flows_;  // [state][component]
};

// One sequence's contribution to the flow objective: standardized frames
// plus the state-component responsibilities computed under the frozen model.
struct WeightedBatchItem {
  const Matrix* frames = nullptr;        // T x D
  std::vector<Matrix> responsibilities;  // per state: T x K
};

// Expected complete-data flow objective (latent log-prior plus Jacobian
// log-determinant, responsibility-weighted) and its exact gradient with
// respect to every coupling-net parameter. `gradient` is resized to
// emission.FlowParameterCount(). Throws on a non-finite result, naming the
// offending batch item and frame.
double FlowLossAndGradients(const NmmEmission& emission, std::span<const WeightedBatchItem> batch,
                            Vector* gradient);

// Lagrangian-closed-form weight update: pi proportional to responsibility
// mass per state. States with zero mass keep their previous weights.
std::vector<Vector> UpdateMixtureWeights(const Matrix& mass,
                                         const std::vector<Vector>& previous_log_weights);

}  // namespace nmmhmm

#endif  // NMMHMM_NMM_H_
