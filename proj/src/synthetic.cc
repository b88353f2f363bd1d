// src/synthetic.cc

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

#include "nmmhmm/synthetic.h"

#include <cmath>
#include <stdexcept>

#include "nmmhmm/emission.h"
#include "nmmhmm/trainer.h"

namespace nmmhmm {

Vector ApplyWarp(const Vector& z, WarpKind warp, double strength) {
  if (warp == WarpKind::kNone) return z;
  Vector y = z;
  for (Eigen::Index d = 1; d < z.size(); ++d) y[d] = z[d] + strength * z[d - 1] * z[d - 1];
  return y;
}

namespace {

void ValidateSpec(const SyntheticDatasetSpec& spec) {
  if (spec.classes.empty()) throw std::invalid_argument("synthetic spec: no classes");
  if (spec.train_per_class < 1 || spec.test_per_class < 0)
    throw std::invalid_argument("synthetic spec: bad sequence counts");
  if (spec.min_length < 1 || spec.max_length < spec.min_length)
    throw std::invalid_argument("synthetic spec: bad length range");
  const Eigen::Index dim = spec.classes.front().states.front().mean.size();
  for (const auto& cls : spec.classes) {
    if (cls.states.empty()) throw std::invalid_argument("synthetic spec: class without states");
    const auto s = static_cast<Eigen::Index>(cls.states.size());
    if (cls.log_init.size() != s || cls.log_trans.rows() != s || cls.log_trans.cols() != s)
      throw std::invalid_argument("synthetic spec: chain shape mismatch in class " + cls.label);
    for (const auto& st : cls.states) {
      if (st.mean.size() != dim || st.stddev.size() != dim)
        throw std::invalid_argument("synthetic spec: state dimension mismatch");
      if (st.mixing.size() != 0 && (st.mixing.rows() != dim || st.mixing.cols() != dim))
        throw std::invalid_argument("synthetic spec: mixing matrix must be D x D");
    }
  }
}

FeatureSequence SampleFromClass(const SyntheticClassSpec& cls, const SyntheticDatasetSpec& spec,
                                int length, Rng* rng) {
  const Eigen::Index dim = cls.states.front().mean.size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  FeatureSequence seq;
  seq.frames.resize(length, dim);
  int state = SampleCategoricalLog(cls.log_init, rng);
  for (int t = 0; t < length; ++t) {
    const SyntheticState& st = cls.states[static_cast<std::size_t>(state)];
    Vector eps(dim);
    for (Eigen::Index d = 0; d < dim; ++d) eps[d] = gauss(*rng);
    Vector z = st.stddev.cwiseProduct(eps);
    if (st.mixing.size() != 0) z = st.mixing * z;
    z += st.mean;
    seq.frames.row(t) = ApplyWarp(z, spec.warp, spec.warp_strength).transpose();
    if (t + 1 < length)
      state = SampleCategoricalLog(cls.log_trans.row(state).transpose(), rng);
  }
  return seq;
}

}  // namespace

SyntheticDataset GenerateSyntheticDataset(const SyntheticDatasetSpec& spec) {
  ValidateSpec(spec);
  SyntheticDataset dataset;
  dataset.spec = spec;
  for (const auto& cls : spec.classes) {
    ClassDataset out;
    out.label = cls.label;
    for (int split = 0; split < 2; ++split) {
      const bool is_train = split == 0;
      const int count = is_train ? spec.train_per_class : spec.test_per_class;
      auto& dest = is_train ? out.train : out.test;
      for (int i = 0; i < count; ++i) {
        Rng rng(DeriveSeed(DeriveSeed(spec.seed, cls.label + (is_train ? ":train" : ":test")),
                           static_cast<uint64_t>(i)));
        std::uniform_int_distribution<int> length_dist(spec.min_length, spec.max_length);
        const int length = length_dist(rng);
        FeatureSequence seq = SampleFromClass(cls, spec, length, &rng);
        seq.source_id = cls.label + (is_train ? ":train:" : ":test:") + std::to_string(i);
        dest.push_back(std::move(seq));
      }
    }
    dataset.classes.push_back(std::move(out));
  }
  return dataset;
}

namespace {

Matrix PairCorrelationMixing(double rho01, double rho23) {
  // Cholesky factors of 2x2 correlation blocks on dims (0,1) and (2,3).
  Matrix m = Matrix::Identity(4, 4);
  m(1, 0) = rho01;
  m(1, 1) = std::sqrt(1.0 - rho01 * rho01);
  m(3, 2) = rho23;
  m(3, 3) = std::sqrt(1.0 - rho23 * rho23);
  return m;
}

}  // namespace

SyntheticDatasetSpec MakeBenchmarkSpec(uint64_t seed, bool warped) {
  SyntheticDatasetSpec spec;
  spec.seed = seed;
  spec.train_per_class = 150;
  spec.test_per_class = 100;
  spec.min_length = 8;
  spec.max_length = 16;

  const int num_states = 3;
  const Matrix log_trans = InitialTransitions(num_states, 0.7);
  const Vector log_init = (Vector(3) << std::log(0.8), std::log(0.15), std::log(0.05)).finished();

  if (!warped) {
    // Well-separated axis-aligned Gaussians; easy for both families.
    const double sep = 4.0;
    for (int c = 0; c < 3; ++c) {
      SyntheticClassSpec cls;
      cls.label = "class" + std::to_string(c);
      cls.log_init = log_init;
      cls.log_trans = log_trans;
      for (int s = 0; s < num_states; ++s) {
        SyntheticState st;
        st.mean = Vector::Zero(4);
        st.mean[c % 4] = sep * (c == 0 ? 1.0 : (c == 1 ? -1.0 : 0.0));
        if (c == 2) st.mean[2] = sep;
        st.mean[3] += 1.5 * s;  // states walk along the last coordinate
        st.stddev = Vector::Constant(4, 0.8);
        cls.states.push_back(std::move(st));
      }
      spec.classes.push_back(std::move(cls));
    }
    return spec;
  }

  // Overlapping means; classes differ mostly in latent correlation structure
  // and get bent through the banana map, which a diagonal GMM tiles poorly.
  spec.warp = WarpKind::kBanana;
  spec.warp_strength = 0.8;
  const double rho[3][2] = {{0.85, -0.85}, {-0.85, 0.85}, {0.0, 0.0}};
  for (int c = 0; c < 3; ++c) {
    SyntheticClassSpec cls;
    cls.label = "class" + std::to_string(c);
    cls.log_init = log_init;
    cls.log_trans = log_trans;
    for (int s = 0; s < num_states; ++s) {
      SyntheticState st;
      st.mean = Vector::Zero(4);
      st.mean[0] = 0.4 * (c - 1);
      st.mean[1] = 1.0 * s - 1.0;
      st.mean[2] = 0.3 * ((c + s) % 2 == 0 ? 1.0 : -1.0);
      st.stddev = Vector::Constant(4, 1.0);
      if (c == 2) st.stddev[1] = 1.6;
      st.mixing = PairCorrelationMixing(rho[c][0], rho[c][1]);
      cls.states.push_back(std::move(st));
    }
    spec.classes.push_back(std::move(cls));
  }
  return spec;
}

}  // namespace nmmhmm
