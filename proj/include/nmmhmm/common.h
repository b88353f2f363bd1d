// nmmhmm/common.h

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

#ifndef NMMHMM_COMMON_H_
#define NMMHMM_COMMON_H_

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <string_view>

namespace nmmhmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), stable for large negative inputs.
double LogAdd(double a, double b);

// logsumexp over a vector; returns -inf for an all -inf input.
double LogSumExp(const Vector& v);

// 64-bit FNV-1a, used for cache keys and config fingerprints.
uint64_t Fnv1a64(std::string_view bytes, uint64_t seed = 1469598103934665603ULL);

// Derives an independent stream seed from a base seed and a tag such as a
// class label or a (class, state, component) path.
uint64_t DeriveSeed(uint64_t base, std::string_view tag);
uint64_t DeriveSeed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0);

// Runs fn(0..n-1) on up to `jobs` threads. Callers must make fn(i) write only
// to slot i so results do not depend on scheduling. Exceptions are re-thrown
// on the calling thread.
void ParallelFor(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace nmmhmm

#endif  // NMMHMM_COMMON_H_
