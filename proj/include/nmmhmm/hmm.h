// nmmhmm/hmm.h

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

#ifndef NMMHMM_HMM_H_
#define NMMHMM_HMM_H_

#include <memory>
#include <span>
#include <string>

#include "nmmhmm/common.h"
#include "nmmhmm/emission.h"
#include "nmmhmm/feature.h"

namespace nmmhmm {

// Per-feature affine standardization fitted on training data and stored with
// each model. Log-likelihoods reported by the model include the Jacobian of
// this map, so they remain densities over the raw feature space.
struct Standardizer {
  bool enabled = false;
  Vector mean;
  Vector stddev;

  Matrix Apply(const Matrix& frames) const;
  Vector Apply(const Vector& x) const;
  Vector Invert(const Vector& z) const;
  // log |d standardized / d raw| per frame = -sum_d log stddev[d].
  double LogJacobianPerFrame() const;

  static Standardizer Fit(std::span<const FeatureSequence> sequences, double min_stddev = 1e-6);
};

// One per-class generative model: initial state distribution, transition
// matrix and an emission family (GMM or NMM), all probabilities in log space.
struct HmmModel {
  Vector log_init;                          // |S|
  Matrix log_trans;                         // |S| x |S|
  std::unique_ptr<EmissionModel> emission;  // never null for a usable model
  Standardizer standardizer;
  std::string label;
  uint64_t config_fingerprint = 0;

  int NumStates() const { return static_cast<int>(log_init.size()); }
  int Dim() const { return emission->Dim(); }

  HmmModel Clone() const;
  void Validate() const;  // distribution + shape invariants
};

struct PosteriorTables {
  Matrix log_alpha;  // T x |S|
  Matrix log_beta;   // T x |S|
  Matrix gamma;      // T x |S|, rows sum to 1
  Matrix xi_sum;     // |S| x |S|, pairwise responsibilities summed over t
  double log_likelihood = 0.0;
};

// Log-space forward-backward over a precomputed T x S emission log-density
// table. The core used by both public inference and training.
PosteriorTables ForwardBackwardFromDensities(const Vector& log_init, const Matrix& log_trans,
                                             const Matrix& log_densities);

// Forward recursion only; returns logsumexp of the final alpha row.
double ForwardLogLikelihoodFromDensities(const Vector& log_init, const Matrix& log_trans,
                                         const Matrix& log_densities);

// Full posterior computation for a raw feature sequence. log_likelihood
// includes the standardization Jacobian term.
PosteriorTables ForwardBackward(const HmmModel& model, const FeatureSequence& seq);

// Forward pass only; equals ForwardBackward(...).log_likelihood exactly.
double SequenceLogLikelihood(const HmmModel& model, const FeatureSequence& seq);

// Closed-form M-step for the initial distribution: q_s proportional to the
// summed first-frame state responsibilities.
Vector UpdateInitialProbs(std::span<const PosteriorTables> posteriors);

// Closed-form M-step for transitions: rows proportional to summed pairwise
// responsibilities; rows with zero mass keep their previous values. Throws
// if no sequence has T >= 2.
Matrix UpdateTransitions(std::span<const PosteriorTables> posteriors,
                         const Matrix& previous_log_trans);

// Generative sampling: states follow log_init then log_trans, observations
// come from the emission model (de-standardized). Deterministic in seed.
FeatureSequence SampleSequence(const HmmModel& model, int length, uint64_t seed);

}  // namespace nmmhmm

#endif  // NMMHMM_HMM_H_
