// src/trainer.cc

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

#include "nmmhmm/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nmmhmm/diag-gmm.h"
#include "nmmhmm/nmm.h"

namespace nmmhmm {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Responsibility split of a state posterior over mixture components:
// resp[s](t, k) = gamma(t, s) * softmax_k(component log densities).
std::vector<Matrix> ComponentResponsibilities(const EmissionModel& emission, const Matrix& frames,
                                              const Matrix& gamma) {
  const int s_max = emission.NumStates();
  const int k_max = emission.NumComponents();
  std::vector<Matrix> resp(static_cast<std::size_t>(s_max));
  for (int s = 0; s < s_max; ++s) resp[static_cast<std::size_t>(s)].resize(frames.rows(), k_max);
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    const Vector x = frames.row(t).transpose();
    for (int s = 0; s < s_max; ++s) {
      const Vector comp = emission.ComponentLogDensity(s, x);
      const double total = LogSumExp(comp);
      for (int k = 0; k < k_max; ++k)
        resp[static_cast<std::size_t>(s)](t, k) = gamma(t, s) * std::exp(comp[k] - total);
    }
  }
  return resp;
}

struct FullPassStats {
  std::vector<PosteriorTables> tables;  // one per sequence
  double total_log_likelihood = 0.0;    // includes standardization Jacobian
};

FullPassStats FullEStep(const HmmModel& model, std::span<const Matrix> std_frames) {
  FullPassStats stats;
  stats.tables.reserve(std_frames.size());
  const double jac = model.standardizer.LogJacobianPerFrame();
  for (const Matrix& frames : std_frames) {
    Matrix log_b = model.emission->LogDensityMatrix(frames);
    if (!log_b.allFinite()) throw std::runtime_error("E-step: non-finite emission log-density");
    stats.tables.push_back(ForwardBackwardFromDensities(model.log_init, model.log_trans, log_b));
    stats.total_log_likelihood +=
        stats.tables.back().log_likelihood + jac * static_cast<double>(frames.rows());
  }
  return stats;
}

std::vector<std::vector<int>> MakeBatches(int num_sequences, int batch_size, Rng* rng) {
  std::vector<int> order(static_cast<std::size_t>(num_sequences));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), *rng);
  std::vector<std::vector<int>> batches;
  for (int start = 0; start < num_sequences; start += batch_size) {
    const int end = std::min(num_sequences, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

}  // namespace

void TrainConfig::Validate() const {
  if (num_components < 1) throw std::invalid_argument("TrainConfig: num_components must be >= 1");
  if (flow_blocks < 0) throw std::invalid_argument("TrainConfig: flow_blocks must be >= 0");
  if (hidden_width < 1) throw std::invalid_argument("TrainConfig: hidden_width must be >= 1");
  if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (max_flow_epochs < 0) throw std::invalid_argument("TrainConfig: max_flow_epochs must be >= 0");
  if (max_outer_iters < 1) throw std::invalid_argument("TrainConfig: max_outer_iters must be >= 1");
  if (rel_tol <= 0.0) throw std::invalid_argument("TrainConfig: rel_tol must be > 0");
  if (state_divisor < 1) throw std::invalid_argument("TrainConfig: state_divisor must be >= 1");
  if (num_states < 0) throw std::invalid_argument("TrainConfig: num_states must be >= 0");
}

int ChooseNumStates(std::span<const FeatureSequence> sequences, const TrainConfig& config) {
  if (config.num_states > 0) return config.num_states;
  double mean_len = 0.0;
  for (const auto& seq : sequences) mean_len += static_cast<double>(seq.NumFrames());
  mean_len /= static_cast<double>(sequences.size());
  const int by_length = static_cast<int>(std::floor(mean_len / config.state_divisor));
  return std::clamp(by_length, 3, 5);
}

Matrix InitialTransitions(int num_states, double self_loop_prob) {
  Matrix log_a = Matrix::Constant(num_states, num_states, kNegInf);
  for (int i = 0; i < num_states; ++i) {
    const int following = num_states - 1 - i;
    if (following == 0) {
      log_a(i, i) = 0.0;  // final state absorbs
      continue;
    }
    log_a(i, i) = std::log(self_loop_prob);
    const double forward_mass = (1.0 - self_loop_prob) / following;
    for (int j = i + 1; j < num_states; ++j) log_a(i, j) = std::log(forward_mass);
  }
  return log_a;
}

std::string TrainLog::ToCsv() const {
  std::ostringstream out;
  out << "iter,loglik,loss,seconds\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.3f\n", row.iteration, row.log_likelihood,
                  row.flow_loss, row.seconds);
    out << buf;
  }
  return out.str();
}

TrainResult TrainClassModel(std::span<const FeatureSequence> sequences, const TrainConfig& config,
                            const std::optional<Standardizer>& standardizer) {
  config.Validate();
  if (sequences.empty()) throw std::invalid_argument("TrainClassModel: no training sequences");
  const Eigen::Index dim = sequences.front().Dim();
  for (const auto& seq : sequences)
    if (seq.Dim() != dim) throw std::invalid_argument("TrainClassModel: dimension mismatch");

  TrainResult result;
  HmmModel& model = result.model;
  if (standardizer.has_value())
    model.standardizer = *standardizer;
  else if (config.standardize)
    model.standardizer = Standardizer::Fit(sequences);

  std::vector<Matrix> std_frames;
  std_frames.reserve(sequences.size());
  for (const auto& seq : sequences) std_frames.push_back(model.standardizer.Apply(seq.frames));

  const int num_states = ChooseNumStates(sequences, config);
  model.log_init =
      Vector::Constant(num_states, -std::log(static_cast<double>(num_states)));
  model.log_trans = InitialTransitions(num_states, config.self_loop_prob);

  const bool is_nmm = config.emission_kind == EmissionKind::kNmm;
  if (is_nmm) {
    if (dim == 1 && config.flow_blocks > 0)
      throw std::invalid_argument("TrainClassModel: 1-d features need flow_blocks = 0");
    model.emission = std::make_unique<NmmEmission>(
        NmmEmission::Init(num_states, config.num_components, static_cast<int>(dim),
                          config.flow_blocks, config.hidden_width, DeriveSeed(config.seed, "flows")));
  } else {
    Eigen::Index total_frames = 0;
    for (const auto& f : std_frames) total_frames += f.rows();
    Matrix pooled(total_frames, dim);
    Eigen::Index at = 0;
    for (const auto& f : std_frames) {
      pooled.middleRows(at, f.rows()) = f;
      at += f.rows();
    }
    model.emission = std::make_unique<GmmEmission>(GmmEmission::Init(
        pooled, num_states, config.num_components, DeriveSeed(config.seed, "gmm"),
        config.var_floor));
  }

  AdamConfig adam_config{config.learning_rate, config.adam_beta1, config.adam_beta2,
                         config.adam_epsilon};
  AdamState adam_state;
  if (is_nmm) {
    auto* nmm = static_cast<NmmEmission*>(model.emission.get());
    adam_state = AdamState(static_cast<Eigen::Index>(nmm->FlowParameterCount()));
  }

  TrainLog& log = result.log;
  double previous_ll = kNegInf;
  HmmModel checkpoint = model.Clone();

  for (int iter = 0; iter < config.max_outer_iters; ++iter) {
    const auto iter_start = Clock::now();
    try {
      // E-step over the full dataset under the model entering this iteration
      // (Algorithm 1's frozen H_old); also yields the train log-likelihood.
      FullPassStats stats = FullEStep(model, std_frames);

      if (iter > 0) {
        const double change = std::abs(stats.total_log_likelihood - previous_ll);
        if (change <= config.rel_tol * std::abs(previous_ll)) {
          log.converged = true;
          previous_ll = stats.total_log_likelihood;
          break;  // model untouched this iteration, so previous_ll is final
        }
      }
      previous_ll = stats.total_log_likelihood;

      double mean_flow_loss = 0.0;
      if (is_nmm && config.max_flow_epochs > 0) {
        auto* nmm = static_cast<NmmEmission*>(model.emission.get());
        // checkpoint still equals the model entering this iteration and
        // serves as the frozen H_old while the flows move.
        Vector params, gradient;
        int steps = 0;
        for (int epoch = 0; epoch < config.max_flow_epochs; ++epoch) {
          Rng shuffle_rng(DeriveSeed(DeriveSeed(config.seed, "shuffle"),
                                     static_cast<uint64_t>(iter), static_cast<uint64_t>(epoch)));
          for (const auto& batch_ids : MakeBatches(static_cast<int>(std_frames.size()),
                                                   config.batch_size, &shuffle_rng)) {
            std::vector<WeightedBatchItem> batch;
            batch.reserve(batch_ids.size());
            for (int id : batch_ids) {
              const Matrix& frames = std_frames[static_cast<std::size_t>(id)];
              Matrix log_b = checkpoint.emission->LogDensityMatrix(frames);
              PosteriorTables tables =
                  ForwardBackwardFromDensities(checkpoint.log_init, checkpoint.log_trans, log_b);
              WeightedBatchItem item;
              item.frames = &frames;
              item.responsibilities =
                  ComponentResponsibilities(*checkpoint.emission, frames, tables.gamma);
              batch.push_back(std::move(item));
            }
            const double loss = FlowLossAndGradients(*nmm, batch, &gradient);
            ClipByGlobalNorm(&gradient, config.grad_clip_norm);
            nmm->GetFlowParameters(&params);
            AdamStep(&params, gradient, &adam_state, adam_config);
            nmm->SetFlowParameters(params);
            mean_flow_loss += loss;
            ++steps;
          }
        }
        if (steps > 0) mean_flow_loss /= steps;
      }

      // Closed-form updates from the H_old posteriors.
      model.log_init = UpdateInitialProbs(stats.tables);
      model.log_trans = UpdateTransitions(stats.tables, model.log_trans);
      if (is_nmm) {
        auto* nmm = static_cast<NmmEmission*>(model.emission.get());
        Matrix mass = Matrix::Zero(num_states, config.num_components);
        for (std::size_t r = 0; r < std_frames.size(); ++r) {
          const auto resp = ComponentResponsibilities(*checkpoint.emission, std_frames[r],
                                                      stats.tables[r].gamma);
          for (int s = 0; s < num_states; ++s) mass.row(s) += resp[static_cast<std::size_t>(s)].colwise().sum();
        }
        nmm->log_weights() = UpdateMixtureWeights(mass, nmm->log_weights());
      } else {
        auto* gmm = static_cast<GmmEmission*>(model.emission.get());
        GmmAccumulator acc(num_states, config.num_components, static_cast<int>(dim));
        for (std::size_t r = 0; r < std_frames.size(); ++r) {
          const Matrix& frames = std_frames[r];
          const auto resp =
              ComponentResponsibilities(*checkpoint.emission, frames, stats.tables[r].gamma);
          for (Eigen::Index t = 0; t < frames.rows(); ++t)
            for (int s = 0; s < num_states; ++s)
              acc.Add(s, frames.row(t).transpose(), resp[static_cast<std::size_t>(s)].row(t).transpose());
        }
        acc.ApplyMStep(gmm);
      }

      log.rows.push_back(
          {iter, stats.total_log_likelihood, mean_flow_loss, Seconds(iter_start)});
      checkpoint = model.Clone();
    } catch (const std::exception& e) {
      log.diverged = true;
      log.divergence_note = e.what();
      model = checkpoint.Clone();
      break;
    }
  }

  if (log.diverged || log.converged) {
    log.final_log_likelihood = previous_ll;
  } else {
    // Ran out of outer iterations after an update; probe once more.
    log.final_log_likelihood = FullEStep(model, std_frames).total_log_likelihood;
  }
  return result;
}

namespace {

Standardizer PooledStandardizer(std::span<const ClassSequences> dataset) {
  Eigen::Index dim = -1;
  Vector sum, sum_sq;
  int64_t n = 0;
  for (const auto& cls : dataset) {
    for (const auto& seq : cls.sequences) {
      if (dim < 0) {
        dim = seq.Dim();
        sum = Vector::Zero(dim);
        sum_sq = Vector::Zero(dim);
      }
      sum += seq.frames.colwise().sum().transpose();
      sum_sq += seq.frames.array().square().colwise().sum().matrix().transpose();
      n += seq.NumFrames();
    }
  }
  Standardizer s;
  s.enabled = true;
  s.mean = sum / static_cast<double>(n);
  Vector var = sum_sq / static_cast<double>(n) - s.mean.cwiseProduct(s.mean);
  s.stddev = var.cwiseMax(1e-12).cwiseSqrt();
  return s;
}

}  // namespace

std::vector<TrainResult> TrainAllClasses(std::span<const ClassSequences> dataset,
                                         const TrainConfig& config, int jobs) {
  if (dataset.empty()) throw std::invalid_argument("TrainAllClasses: empty dataset");
  for (const auto& cls : dataset)
    if (cls.sequences.empty())
      throw std::runtime_error("TrainAllClasses: class '" + cls.label +
                               "' has no training sequences");

  std::optional<Standardizer> pooled;
  if (config.standardize) pooled = PooledStandardizer(dataset);

  std::vector<TrainResult> results(dataset.size());
  ParallelFor(static_cast<int>(dataset.size()), jobs, [&](int i) {
    const auto& cls = dataset[static_cast<std::size_t>(i)];
    TrainConfig class_config = config;
    class_config.seed = DeriveSeed(config.seed, cls.label);
    results[static_cast<std::size_t>(i)] = TrainClassModel(cls.sequences, class_config, pooled);
    results[static_cast<std::size_t>(i)].model.label = cls.label;
  });
  return results;
}

}  // namespace nmmhmm
