// tests/testing/oracles.h

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
//
// Independent reference implementations used only to check the library:
// brute-force path enumeration, numerical Jacobians, central differences and
// periodogram band powers. Deliberately slow and simple.

#ifndef NMMHMM_TESTS_TESTING_ORACLES_H_
#define NMMHMM_TESTS_TESTING_ORACLES_H_

#include <Eigen/LU>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "nmmhmm/common.h"
#include "nmmhmm/emission.h"
#include "nmmhmm/fft.h"
#include "nmmhmm/flow.h"

namespace nmmhmm::testing {

// Exhaustive sum over all |S|^T state paths of q(s1) b(1,s1) prod A b.
inline double BruteForceLogLikelihood(const Vector& log_init, const Matrix& log_trans,
                                      const Matrix& log_densities) {
  const int t_max = static_cast<int>(log_densities.rows());
  const int s_max = static_cast<int>(log_densities.cols());
  std::vector<int> path(static_cast<std::size_t>(t_max), 0);
  double total = kNegInf;
  for (;;) {
    double log_p = log_init[path[0]] + log_densities(0, path[0]);
    for (int t = 1; t < t_max; ++t)
      log_p += log_trans(path[static_cast<std::size_t>(t - 1)], path[static_cast<std::size_t>(t)]) +
               log_densities(t, path[static_cast<std::size_t>(t)]);
    total = LogAdd(total, log_p);
    int pos = t_max - 1;
    while (pos >= 0 && ++path[static_cast<std::size_t>(pos)] == s_max) {
      path[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return total;
}

// log |det d f / d x| via central differences on the inverse map.
inline double NumericalJacobianLogDet(const FlowGenerator& flow, const Vector& x,
                                      double step = 1e-5) {
  const Eigen::Index dim = x.size();
  Matrix jacobian(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Vector hi = x, lo = x;
    hi[j] += step;
    lo[j] -= step;
    const Vector z_hi = flow.Inverse(hi, nullptr);
    const Vector z_lo = flow.Inverse(lo, nullptr);
    jacobian.col(j) = (z_hi - z_lo) / (2.0 * step);
  }
  return std::log(std::abs(jacobian.fullPivLu().determinant()));
}

// Central-difference gradient of fn at params.
inline Vector CentralDifferenceGradient(const std::function<double(const Vector&)>& fn,
                                        const Vector& params, double step = 1e-5) {
  Vector grad(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    Vector hi = params, lo = params;
    hi[i] += step;
    lo[i] -= step;
    grad[i] = (fn(hi) - fn(lo)) / (2.0 * step);
  }
  return grad;
}

// Symmetric relative error with an absolute floor for near-zero pairs.
inline double RelativeError(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max(floor, 0.5 * (std::abs(a) + std::abs(b)));
}

struct Periodogram {
  std::vector<double> power;  // one bin per frequency 0..n/2
  double bin_hz = 0.0;
};

inline Periodogram ComputePeriodogram(const std::vector<double>& samples, int sample_rate_hz) {
  const std::size_t n = NextPowerOfTwo(samples.size());
  std::vector<std::complex<double>> spec(n);
  for (std::size_t i = 0; i < samples.size(); ++i) spec[i] = samples[i];
  Fft(&spec, false);
  Periodogram p;
  p.bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(n);
  p.power.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) p.power[k] = std::norm(spec[k]);
  return p;
}

// Total power in [f_lo, f_hi).
inline double BandPower(const Periodogram& p, double f_lo, double f_hi) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.power.size(); ++k) {
    const double f = static_cast<double>(k) * p.bin_hz;
    if (f >= f_lo && f < f_hi) total += p.power[k];
  }
  return total;
}

// Mean power per bin in [f_lo, f_hi).
inline double BandDensity(const Periodogram& p, double f_lo, double f_hi) {
  double total = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < p.power.size(); ++k) {
    const double f = static_cast<double>(k) * p.bin_hz;
    if (f >= f_lo && f < f_hi) {
      total += p.power[k];
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / count;
}

// Gives every coupling-net parameter (including the zero-initialized output
// layers) a small random value, for tests that need a non-trivial flow.
inline void RandomizeFlowParameters(FlowGenerator* flow, uint64_t seed, double scale = 0.3) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  Vector params(static_cast<Eigen::Index>(flow->ParameterCount()));
  for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = uniform(rng);
  flow->SetParameters(std::span<const double>(params.data(), static_cast<std::size_t>(params.size())));
}

// Emission stub with a fixed log-density table (frame t, state s); lets HMM
// tests pin densities by hand.
class TableEmission : public EmissionModel {
 public:
  explicit TableEmission(Matrix table, int dim = 1) : table_(std::move(table)), dim_(dim) {}

  int NumStates() const override { return static_cast<int>(table_.cols()); }
  int NumComponents() const override { return 1; }
  int Dim() const override { return dim_; }
  std::string_view Kind() const override { return "table"; }

  Matrix LogDensityMatrix(const Matrix& frames) const override {
    if (frames.rows() > table_.rows()) throw std::runtime_error("TableEmission: too many frames");
    return table_.topRows(frames.rows());
  }
  Vector ComponentLogDensity(int state, const Vector&) const override {
    Vector v(1);
    v[0] = table_(0, state);
    return v;
  }
  Vector Sample(int, Rng*) const override { return Vector::Zero(dim_); }
  std::unique_ptr<EmissionModel> Clone() const override {
    return std::make_unique<TableEmission>(*this);
  }

 private:
  Matrix table_;
  int dim_;
};

}  // namespace nmmhmm::testing

#endif  // NMMHMM_TESTS_TESTING_ORACLES_H_
