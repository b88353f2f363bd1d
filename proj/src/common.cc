// src/common.cc

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

#include "nmmhmm/common.h"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

namespace nmmhmm {

double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

double LogSumExp(const Vector& v) {
  if (v.size() == 0) return kNegInf;
  double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::exp(v[i] - m);
  return m + std::log(sum);
}

uint64_t Fnv1a64(std::string_view bytes, uint64_t seed) {
  uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t DeriveSeed(uint64_t base, std::string_view tag) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((base >> (8 * i)) & 0xff);
  uint64_t h = Fnv1a64(std::string_view(buf, 8));
  return Fnv1a64(tag, h);
}

uint64_t DeriveSeed(uint64_t base, uint64_t a, uint64_t b, uint64_t c) {
  char buf[32];
  uint64_t words[4] = {base, a, b, c};
  for (int w = 0; w < 4; ++w)
    for (int i = 0; i < 8; ++i) buf[8 * w + i] = static_cast<char>((words[w] >> (8 * i)) & 0xff);
  return Fnv1a64(std::string_view(buf, 32));
}

void ParallelFor(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace nmmhmm
