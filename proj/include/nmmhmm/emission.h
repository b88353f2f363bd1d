// nmmhmm/emission.h

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

#ifndef NMMHMM_EMISSION_H_
#define NMMHMM_EMISSION_H_

#include <memory>
#include <string_view>

#include "nmmhmm/common.h"

namespace nmmhmm {

// Per-state observation density. Implementations are immutable during
// inference; all evaluators are safe to call concurrently.
class EmissionModel {
 public:
  virtual ~EmissionModel() = default;

  virtual int NumStates() const = 0;
  virtual int NumComponents() const = 0;
  virtual int Dim() const = 0;
  virtual std::string_view Kind() const = 0;  // "gmm" or "nmm"

  // log p(x | state) for every (frame, state); frames is T x D.
  virtual Matrix LogDensityMatrix(const Matrix& frames) const;

  // Per-component log(pi_{s,k} p(x | s, k)); length K. The state total is
  // the logsumexp of this vector.
  virtual Vector ComponentLogDensity(int state, const Vector& x) const = 0;

  // Generative draw: component ~ Categorical(pi_state), then one observation.
  virtual Vector Sample(int state, Rng* rng) const = 0;

  virtual std::unique_ptr<EmissionModel> Clone() const = 0;
};

// Draws an index from a categorical given log-probabilities.
int SampleCategoricalLog(const Vector& log_probs, Rng* rng);

}  // namespace nmmhmm

#endif  // NMMHMM_EMISSION_H_
