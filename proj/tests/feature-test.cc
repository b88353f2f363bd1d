// tests/feature-test.cc

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

#include "nmmhmm/feature.h"

#include <cmath>
#include <doctest.h>

#include "nmmhmm/fft.h"
#include "testing/oracles.h"

using namespace nmmhmm;

namespace {

AudioBuffer Tone(double freq_hz, double seconds, int sample_rate = 16000, double amp = 0.5) {
  AudioBuffer buf;
  buf.sample_rate_hz = sample_rate;
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  buf.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    buf.samples[i] = amp * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) / sample_rate);
  return buf;
}

AudioBuffer Zeros(int64_t n, int sample_rate = 16000) {
  AudioBuffer buf;
  buf.sample_rate_hz = sample_rate;
  buf.samples.assign(static_cast<std::size_t>(n), 0.0);
  return buf;
}

}  // namespace

TEST_CASE("fft matches a naive dft") {
  Rng rng(11);
  std::normal_distribution<double> gauss;
  const std::size_t n = 16;
  std::vector<std::complex<double>> data(n);
  for (auto& v : data) v = {gauss(rng), gauss(rng)};
  auto fft = data;
  Fft(&fft, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> direct = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      direct += data[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * j) / n);
    CHECK(std::abs(fft[k] - direct) < 1e-10);
  }
  Fft(&fft, true);
  for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(fft[j] - data[j]) < 1e-12);
}

TEST_CASE("frame counts follow floor((N - W) / S) + 1") {
  CHECK(FrameSignal(Zeros(16000), 0.025, 0.010).size() == 98);
  CHECK(FrameSignal(Zeros(400), 0.025, 0.010).size() == 1);
  CHECK_THROWS_AS(FrameSignal(Zeros(399), 0.025, 0.010), std::runtime_error);
  // Property over a grid of (N, W, S).
  for (int64_t n : {400, 401, 559, 560, 561, 1000, 4096}) {
    for (int w_ms : {10, 25}) {
      for (int s_ms : {5, 10, 12}) {
        const int64_t w = w_ms * 16, s = s_ms * 16;
        if (n < w) continue;
        const auto frames = FrameSignal(Zeros(n), w_ms / 1000.0, s_ms / 1000.0);
        CHECK(static_cast<int64_t>(frames.size()) == (n - w) / s + 1);
        CHECK(frames.front().size() == w);
      }
    }
  }
}

TEST_CASE("dct basis is orthonormal") {
  const Matrix dct = DctMatrix(26, 26);
  const Matrix gram = dct * dct.transpose();
  CHECK((gram - Matrix::Identity(26, 26)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mfcc of a stationary signal is identical per frame") {
  const FeatureConfig config;
  const Matrix ceps = Mfcc(Zeros(16000), config);
  CHECK(ceps.rows() == 98);
  CHECK(ceps.cols() == 13);
  for (Eigen::Index t = 1; t < ceps.rows(); ++t)
    CHECK((ceps.row(t) - ceps.row(0)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(ceps.allFinite());
}

TEST_CASE("mfcc distinguishes tones") {
  const FeatureConfig config;
  const Matrix low = Mfcc(Tone(1000.0, 0.2), config);
  const Matrix high = Mfcc(Tone(4000.0, 0.2), config);
  CHECK((low.row(0) - high.row(0)).cwiseAbs().maxCoeff() > 0.5);
}

TEST_CASE("one second of audio yields 98 x 39 features") {
  const FeatureConfig config;
  const FeatureSequence seq = ExtractFeatures(Tone(440.0, 1.0), config);
  CHECK(seq.NumFrames() == 98);
  CHECK(seq.Dim() == 39);
  CHECK(seq.frames.allFinite());
}

TEST_CASE("mfcc rejects fewer mel bins than cepstra") {
  FeatureConfig config;
  config.num_mel_bins = 10;
  CHECK_THROWS_AS(Mfcc(Zeros(16000), config), std::invalid_argument);
}

TEST_CASE("deltas: shape, constant input, ramp") {
  const Eigen::Index t_max = 20;
  Matrix constant = Matrix::Constant(t_max, 13, 3.25);
  Matrix with_deltas = AddDeltas(constant, 2);
  CHECK(with_deltas.rows() == t_max);
  CHECK(with_deltas.cols() == 39);
  CHECK(with_deltas.leftCols(13) == constant);
  CHECK(with_deltas.rightCols(26).cwiseAbs().maxCoeff() == 0.0);

  Matrix ramp(t_max, 1);
  for (Eigen::Index t = 0; t < t_max; ++t) ramp(t, 0) = static_cast<double>(t);
  Matrix out = AddDeltas(ramp, 2);
  for (Eigen::Index t = 2; t < t_max - 2; ++t)
    CHECK(out(t, 1) == doctest::Approx(1.0).epsilon(1e-12));
  for (Eigen::Index t = 4; t < t_max - 4; ++t)
    CHECK(out(t, 2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("features stay finite on quiet and loud input") {
  FeatureConfig config;
  for (double amp : {0.0, 1e-8, 0.9}) {
    AudioBuffer buf = Tone(123.0, 0.1, 16000, amp);
    const FeatureSequence seq = ExtractFeatures(buf, config);
    CHECK(seq.frames.allFinite());
  }
}

TEST_CASE("config fingerprint reacts to every field") {
  const FeatureConfig base;
  auto fp = base.Fingerprint();
  FeatureConfig c = base;
  c.sample_rate_hz = 8000;
  CHECK(c.Fingerprint() != fp);
  c = base;
  c.num_mel_bins = 25;
  CHECK(c.Fingerprint() != fp);
  c = base;
  c.log_floor = 1e-9;
  CHECK(c.Fingerprint() != fp);
  c = base;
  c.deltas = false;
  CHECK(c.Fingerprint() != fp);
  CHECK(base.Fingerprint() == fp);
}
