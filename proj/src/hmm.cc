// src/hmm.cc

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

#include "nmmhmm/hmm.h"

#include <cmath>
#include <stdexcept>

namespace nmmhmm {

namespace {

void CheckDistribution(const Vector& log_p, const char* what) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < log_p.size(); ++i) sum += std::exp(log_p[i]);
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::runtime_error(std::string(what) + " does not sum to 1 (got " +
                             std::to_string(sum) + ")");
}

}  // namespace

Matrix Standardizer::Apply(const Matrix& frames) const {
  if (!enabled) return frames;
  return (frames.rowwise() - mean.transpose()).array().rowwise() /
         stddev.transpose().array();
}

Vector Standardizer::Apply(const Vector& x) const {
  if (!enabled) return x;
  return (x - mean).cwiseQuotient(stddev);
}

Vector Standardizer::Invert(const Vector& z) const {
  if (!enabled) return z;
  return z.cwiseProduct(stddev) + mean;
}

double Standardizer::LogJacobianPerFrame() const {
  if (!enabled) return 0.0;
  return -stddev.array().log().sum();
}

Standardizer Standardizer::Fit(std::span<const FeatureSequence> sequences, double min_stddev) {
  if (sequences.empty()) throw std::invalid_argument("Standardizer::Fit: no sequences");
  const Eigen::Index d = sequences.front().Dim();
  Vector sum = Vector::Zero(d), sum_sq = Vector::Zero(d);
  int64_t n = 0;
  for (const auto& seq : sequences) {
    if (seq.Dim() != d) throw std::invalid_argument("Standardizer::Fit: dimension mismatch");
    sum += seq.frames.colwise().sum().transpose();
    sum_sq += seq.frames.array().square().colwise().sum().matrix().transpose();
    n += seq.NumFrames();
  }
  Standardizer s;
  s.enabled = true;
  s.mean = sum / static_cast<double>(n);
  Vector var = sum_sq / static_cast<double>(n) - s.mean.cwiseProduct(s.mean);
  s.stddev = var.cwiseMax(min_stddev * min_stddev).cwiseSqrt();
  return s;
}

HmmModel HmmModel::Clone() const {
  HmmModel copy;
  copy.log_init = log_init;
  copy.log_trans = log_trans;
  copy.emission = emission ? emission->Clone() : nullptr;
  copy.standardizer = standardizer;
  copy.label = label;
  copy.config_fingerprint = config_fingerprint;
  return copy;
}

void HmmModel::Validate() const {
  const int s = NumStates();
  if (s < 1) throw std::runtime_error("HmmModel: need at least one state");
  if (log_trans.rows() != s || log_trans.cols() != s)
    throw std::runtime_error("HmmModel: transition matrix shape mismatch");
  CheckDistribution(log_init, "initial distribution");
  for (int i = 0; i < s; ++i) CheckDistribution(log_trans.row(i).transpose(), "transition row");
  if (!emission) throw std::runtime_error("HmmModel: missing emission model");
  if (emission->NumStates() != s) throw std::runtime_error("HmmModel: emission state count mismatch");
}

PosteriorTables ForwardBackwardFromDensities(const Vector& log_init, const Matrix& log_trans,
                                             const Matrix& log_densities) {
  const Eigen::Index t_max = log_densities.rows();
  const Eigen::Index s_max = log_densities.cols();
  if (t_max < 1) throw std::invalid_argument("forward-backward: empty sequence");
  if (log_init.size() != s_max || log_trans.rows() != s_max || log_trans.cols() != s_max)
    throw std::invalid_argument("forward-backward: state count mismatch");

  PosteriorTables tables;
  tables.log_alpha.resize(t_max, s_max);
  tables.log_beta.resize(t_max, s_max);

  tables.log_alpha.row(0) = (log_init + log_densities.row(0).transpose()).transpose();
  Vector work(s_max);
  for (Eigen::Index t = 1; t < t_max; ++t) {
    for (Eigen::Index j = 0; j < s_max; ++j) {
      work = tables.log_alpha.row(t - 1).transpose() + log_trans.col(j);
      tables.log_alpha(t, j) = log_densities(t, j) + LogSumExp(work);
    }
  }
  tables.log_likelihood = LogSumExp(tables.log_alpha.row(t_max - 1).transpose());
  if (std::isnan(tables.log_likelihood) || tables.log_likelihood == kNegInf)
    throw std::runtime_error("forward-backward: non-finite sequence log-likelihood");

  tables.log_beta.row(t_max - 1).setZero();
  for (Eigen::Index t = t_max - 2; t >= 0; --t) {
    for (Eigen::Index i = 0; i < s_max; ++i) {
      work = log_trans.row(i).transpose() + log_densities.row(t + 1).transpose() +
             tables.log_beta.row(t + 1).transpose();
      tables.log_beta(t, i) = LogSumExp(work);
    }
  }

  tables.gamma = ((tables.log_alpha + tables.log_beta).array() - tables.log_likelihood).exp();

  tables.xi_sum = Matrix::Zero(s_max, s_max);
  for (Eigen::Index t = 1; t < t_max; ++t) {
    for (Eigen::Index i = 0; i < s_max; ++i) {
      for (Eigen::Index j = 0; j < s_max; ++j) {
        const double log_xi = tables.log_alpha(t - 1, i) + log_trans(i, j) +
                              log_densities(t, j) + tables.log_beta(t, j) -
                              tables.log_likelihood;
        tables.xi_sum(i, j) += std::exp(log_xi);
      }
    }
  }
  return tables;
}

double ForwardLogLikelihoodFromDensities(const Vector& log_init, const Matrix& log_trans,
                                         const Matrix& log_densities) {
  const Eigen::Index t_max = log_densities.rows();
  const Eigen::Index s_max = log_densities.cols();
  if (t_max < 1) throw std::invalid_argument("forward: empty sequence");
  Vector alpha = log_init + log_densities.row(0).transpose();
  Vector next(s_max), work(s_max);
  for (Eigen::Index t = 1; t < t_max; ++t) {
    for (Eigen::Index j = 0; j < s_max; ++j) {
      work = alpha + log_trans.col(j);
      next[j] = log_densities(t, j) + LogSumExp(work);
    }
    alpha.swap(next);
  }
  const double ll = LogSumExp(alpha);
  if (std::isnan(ll) || ll == kNegInf)
    throw std::runtime_error("forward: non-finite sequence log-likelihood");
  return ll;
}

namespace {

Matrix EmissionLogDensities(const HmmModel& model, const FeatureSequence& seq) {
  if (seq.Dim() != model.Dim())
    throw std::invalid_argument("sequence dimension " + std::to_string(seq.Dim()) +
                                " does not match model dimension " + std::to_string(model.Dim()));
  const Matrix standardized = model.standardizer.Apply(seq.frames);
  Matrix log_b = model.emission->LogDensityMatrix(standardized);
  if (!log_b.allFinite()) throw std::runtime_error("non-finite emission log-density");
  return log_b;
}

}  // namespace

PosteriorTables ForwardBackward(const HmmModel& model, const FeatureSequence& seq) {
  const Matrix log_b = EmissionLogDensities(model, seq);
  PosteriorTables tables = ForwardBackwardFromDensities(model.log_init, model.log_trans, log_b);
  tables.log_likelihood +=
      static_cast<double>(seq.NumFrames()) * model.standardizer.LogJacobianPerFrame();
  return tables;
}

double SequenceLogLikelihood(const HmmModel& model, const FeatureSequence& seq) {
  const Matrix log_b = EmissionLogDensities(model, seq);
  return ForwardLogLikelihoodFromDensities(model.log_init, model.log_trans, log_b) +
         static_cast<double>(seq.NumFrames()) * model.standardizer.LogJacobianPerFrame();
}

Vector UpdateInitialProbs(std::span<const PosteriorTables> posteriors) {
  if (posteriors.empty()) throw std::invalid_argument("UpdateInitialProbs: no posteriors");
  Vector counts = Vector::Zero(posteriors.front().gamma.cols());
  for (const auto& p : posteriors) counts += p.gamma.row(0).transpose();
  const double total = counts.sum();
  Vector log_q(counts.size());
  for (Eigen::Index s = 0; s < counts.size(); ++s)
    log_q[s] = counts[s] > 0.0 ? std::log(counts[s] / total) : kNegInf;
  return log_q;
}

Matrix UpdateTransitions(std::span<const PosteriorTables> posteriors,
                         const Matrix& previous_log_trans) {
  if (posteriors.empty()) throw std::invalid_argument("UpdateTransitions: no posteriors");
  const Eigen::Index s_max = previous_log_trans.rows();
  Matrix counts = Matrix::Zero(s_max, s_max);
  bool any_transition = false;
  for (const auto& p : posteriors) {
    counts += p.xi_sum;
    if (p.gamma.rows() >= 2) any_transition = true;
  }
  if (!any_transition)
    throw std::runtime_error("UpdateTransitions: every sequence has a single frame");
  Matrix log_a = previous_log_trans;
  for (Eigen::Index i = 0; i < s_max; ++i) {
    const double row_mass = counts.row(i).sum();
    if (row_mass <= 0.0) continue;  // unreachable state keeps its previous row
    for (Eigen::Index j = 0; j < s_max; ++j)
      log_a(i, j) = counts(i, j) > 0.0 ? std::log(counts(i, j) / row_mass) : kNegInf;
  }
  return log_a;
}

FeatureSequence SampleSequence(const HmmModel& model, int length, uint64_t seed) {
  if (length < 1) throw std::invalid_argument("SampleSequence: length must be >= 1");
  Rng rng(seed);
  FeatureSequence seq;
  seq.frames.resize(length, model.Dim());
  int state = SampleCategoricalLog(model.log_init, &rng);
  for (int t = 0; t < length; ++t) {
    Vector x = model.emission->Sample(state, &rng);
    seq.frames.row(t) = model.standardizer.Invert(x).transpose();
    if (t + 1 < length)
      state = SampleCategoricalLog(model.log_trans.row(state).transpose(), &rng);
  }
  return seq;
}

}  // namespace nmmhmm
