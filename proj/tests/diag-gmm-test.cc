// tests/diag-gmm-test.cc

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
#include <doctest.h>

#include "testing/oracles.h"

using namespace nmmhmm;

namespace {

GmmEmission SingleState(Vector log_weights, Matrix means, Matrix log_vars) {
  std::vector<GmmEmission::State> st(1);
  st[0].log_weights = std::move(log_weights);
  st[0].means = std::move(means);
  st[0].log_vars = std::move(log_vars);
  return GmmEmission(std::move(st), 1e-8);
}

}  // namespace

TEST_CASE("standard normal at its mode") {
  auto gmm = SingleState(Vector::Zero(1), Matrix::Zero(1, 1), Matrix::Zero(1, 1));
  const Vector comp = gmm.ComponentLogDensity(0, Vector::Zero(1));
  CHECK(LogSumExp(comp) == doctest::Approx(-0.9189385332046727).epsilon(1e-12));
}

TEST_CASE("equal-weight identical components marginalize out") {
  Matrix means = Matrix::Constant(2, 3, 0.7);
  Matrix log_vars = Matrix::Constant(2, 3, std::log(0.5));
  auto gmm = SingleState(Vector::Constant(2, std::log(0.5)), means, log_vars);
  auto single = SingleState(Vector::Zero(1), means.topRows(1), log_vars.topRows(1));
  Vector x = (Vector(3) << 0.1, -0.4, 1.9).finished();
  CHECK(LogSumExp(gmm.ComponentLogDensity(0, x)) ==
        doctest::Approx(LogSumExp(single.ComponentLogDensity(0, x))).epsilon(1e-12));
}

TEST_CASE("log density matches direct (non-log) arithmetic") {
  Rng rng(31);
  std::uniform_real_distribution<double> uniform(0.2, 2.0);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 1 + trial % 3, d = 1 + trial % 4;
    Vector weights(k);
    for (int i = 0; i < k; ++i) weights[i] = uniform(rng);
    weights /= weights.sum();
    Matrix means(k, d), log_vars(k, d);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d; ++j) {
        means(i, j) = gauss(rng);
        log_vars(i, j) = std::log(uniform(rng));
      }
    auto gmm = SingleState(weights.array().log(), means, log_vars);
    Vector x(d);
    for (int j = 0; j < d; ++j) x[j] = gauss(rng);

    double direct = 0.0;
    for (int i = 0; i < k; ++i) {
      double density = 1.0;
      for (int j = 0; j < d; ++j) {
        const double var = std::exp(log_vars(i, j));
        const double diff = x[j] - means(i, j);
        density *= std::exp(-0.5 * diff * diff / var) / std::sqrt(2.0 * M_PI * var);
      }
      direct += weights[i] * density;
    }
    const double total = LogSumExp(gmm.ComponentLogDensity(0, x));
    CHECK(nmmhmm::testing::RelativeError(total, std::log(direct)) < 1e-10);

    // total is bounded by the best component and the component count.
    const Vector comp = gmm.ComponentLogDensity(0, x);
    CHECK(total >= comp.maxCoeff());
    CHECK(total <= comp.maxCoeff() + std::log(static_cast<double>(k)) + 1e-12);
  }
}

TEST_CASE("m-step reproduces weighted moments") {
  Rng rng(77);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  const int n = 200, d = 3;
  Matrix frames(n, d);
  Vector gamma(n);
  for (int t = 0; t < n; ++t) {
    gamma[t] = uniform(rng);
    for (int j = 0; j < d; ++j) frames(t, j) = 1.5 * gauss(rng) + 0.3;
  }

  auto gmm = SingleState(Vector::Zero(1), Matrix::Zero(1, d), Matrix::Zero(1, d));
  GmmAccumulator acc(1, 1, d);
  for (int t = 0; t < n; ++t) acc.Add(0, frames.row(t).transpose(), gamma.segment(t, 1));
  acc.ApplyMStep(&gmm);

  const double mass = gamma.sum();
  Vector mean = Vector::Zero(d), var = Vector::Zero(d);
  for (int t = 0; t < n; ++t) mean += gamma[t] * frames.row(t).transpose();
  mean /= mass;
  for (int t = 0; t < n; ++t)
    var += gamma[t] * (frames.row(t).transpose() - mean).array().square().matrix();
  var /= mass;

  CHECK((gmm.states()[0].means.row(0).transpose() - mean).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((gmm.states()[0].log_vars.row(0).transpose() - var.array().log().matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK(gmm.states()[0].log_weights[0] == doctest::Approx(0.0));
}

TEST_CASE("starved components keep their parameters") {
  Matrix means(2, 2), log_vars = Matrix::Zero(2, 2);
  means << 0.0, 0.0, 5.0, 5.0;
  auto gmm = SingleState(Vector::Constant(2, std::log(0.5)), means, log_vars);
  GmmAccumulator acc(1, 2, 2);
  Vector resp(2);
  resp << 1.0, 0.0;  // all responsibility on component 0
  for (int t = 0; t < 50; ++t) acc.Add(0, Vector::Constant(2, 1.0), resp);
  acc.ApplyMStep(&gmm);
  CHECK(gmm.states()[0].means.row(1) == means.row(1));
  CHECK(gmm.states()[0].log_vars.row(1) == log_vars.row(1));
  CHECK(std::exp(gmm.states()[0].log_weights[0]) == doctest::Approx(1.0));
}

TEST_CASE("variance floor binds after the update") {
  auto gmm = SingleState(Vector::Zero(1), Matrix::Zero(1, 1), Matrix::Zero(1, 1));
  std::vector<GmmEmission::State> st(1);
  st[0].log_weights = Vector::Zero(1);
  st[0].means = Matrix::Zero(1, 1);
  st[0].log_vars = Matrix::Zero(1, 1);
  GmmEmission floored(std::move(st), 1e-3);
  GmmAccumulator acc(1, 1, 1);
  Vector one = Vector::Ones(1);
  // Constant data: sample variance zero, so the floor must apply.
  for (int t = 0; t < 20; ++t) acc.Add(0, Vector::Constant(1, 2.5), one);
  acc.ApplyMStep(&floored);
  CHECK(floored.states()[0].log_vars(0, 0) == doctest::Approx(std::log(1e-3)));
  CHECK(floored.states()[0].means(0, 0) == doctest::Approx(2.5));
}

TEST_CASE("seeded init draws means from the data and is reproducible") {
  Rng rng(5);
  std::normal_distribution<double> gauss;
  Matrix frames(100, 2);
  for (int t = 0; t < 100; ++t)
    for (int j = 0; j < 2; ++j) frames(t, j) = gauss(rng);
  const auto a = GmmEmission::Init(frames, 2, 3, 42, 1e-3);
  const auto b = GmmEmission::Init(frames, 2, 3, 42, 1e-3);
  for (int s = 0; s < 2; ++s) {
    CHECK(a.states()[static_cast<std::size_t>(s)].means ==
          b.states()[static_cast<std::size_t>(s)].means);
    for (int k = 0; k < 3; ++k) {
      bool found = false;
      for (int t = 0; t < 100 && !found; ++t)
        found = (frames.row(t) - a.states()[static_cast<std::size_t>(s)].means.row(k)).norm() == 0.0;
      CHECK(found);
    }
  }
}
