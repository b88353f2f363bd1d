// nmmhmm/trainer.h

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

#ifndef NMMHMM_TRAINER_H_
#define NMMHMM_TRAINER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nmmhmm/adam.h"
#include "nmmhmm/hmm.h"

namespace nmmhmm {

enum class EmissionKind { kGmm, kNmm };

struct TrainConfig {
  EmissionKind emission_kind = EmissionKind::kGmm;
  int num_components = 20;   // K; the paper's chosen GMM baseline
  int flow_blocks = 4;       // NMM only; pairs of coupling layers
  int hidden_width = 64;     // coupling-net hidden layer size
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double grad_clip_norm = 5.0;  // <= 0 disables clipping
  int batch_size = 128;         // sequences per mini-batch
  int max_flow_epochs = 10;     // inner gradient epochs per outer iteration
  int max_outer_iters = 50;
  double rel_tol = 1e-4;
  uint64_t seed = 0;
  int state_divisor = 3;  // num_states = clamp(floor(mean_T / divisor), 3, 5)
  int num_states = 0;     // > 0 overrides the heuristic
  bool standardize = true;
  double var_floor = 1e-3;  // GMM only
  double self_loop_prob = 0.6;

  void Validate() const;
};

struct TrainLogRow {
  int iteration = 0;
  double log_likelihood = 0.0;  // total train log-likelihood entering the iteration
  double flow_loss = 0.0;       // mean inner-epoch flow objective (NMM only)
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<TrainLogRow> rows;
  bool converged = false;
  bool diverged = false;       // aborted on non-finite values; model is the
                               // last finite checkpoint
  std::string divergence_note;
  // Total train log-likelihood of the returned model.
  double final_log_likelihood = 0.0;

  std::string ToCsv() const;  // iter,loglik,loss,seconds
};

struct TrainResult {
  HmmModel model;
  TrainLog log;
};

// State-count heuristic from the mean sequence length.
int ChooseNumStates(std::span<const FeatureSequence> sequences, const TrainConfig& config);

// Upper-triangular initialization: self-loop mass plus the remainder split
// over the states that follow.
Matrix InitialTransitions(int num_states, double self_loop_prob);

// Trains one per-class model with EM. GMM: exact Baum-Welch M-steps.
// NMM: inner Adam epochs on the flow parameters with responsibilities frozen
// under the previous model, then closed-form updates of the initial,
// transition and mixture-weight distributions.
TrainResult TrainClassModel(std::span<const FeatureSequence> sequences, const TrainConfig& config,
                            const std::optional<Standardizer>& standardizer = std::nullopt);

struct ClassSequences {
  std::string label;
  std::vector<FeatureSequence> sequences;
};

// One independently trained model per class, in input order. Standardization
// statistics are pooled over every class's training data and shared. Classes
// train concurrently on up to `jobs` threads with identical results for any
// job count.
std::vector<TrainResult> TrainAllClasses(std::span<const ClassSequences> dataset,
                                         const TrainConfig& config, int jobs = 1);

}  // namespace nmmhmm

#endif  // NMMHMM_TRAINER_H_
