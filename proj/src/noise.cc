// src/noise.cc

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

#include "nmmhmm/noise.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nmmhmm/fft.h"

namespace nmmhmm {

namespace {

double MeanPower(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  return x.empty() ? 0.0 : p / static_cast<double>(x.size());
}

void NormalizeToUnitPower(std::vector<double>* x) {
  double p = MeanPower(*x);
  if (p <= 0.0) return;
  const double scale = 1.0 / std::sqrt(p);
  for (double& v : *x) v *= scale;
}

}  // namespace

AudioBuffer SynthNoise(NoiseKind kind, int64_t length, uint64_t seed, int sample_rate_hz) {
  if (length < 1) throw std::invalid_argument("SynthNoise: length must be >= 1");
  if (kind == NoiseKind::kFile) throw std::invalid_argument("SynthNoise: kind must be white or pink");
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  AudioBuffer out;
  out.sample_rate_hz = sample_rate_hz;
  out.samples.resize(static_cast<std::size_t>(length));
  if (kind == NoiseKind::kWhite) {
    for (auto& v : out.samples) v = gauss(rng);
    NormalizeToUnitPower(&out.samples);
    return out;
  }

  // Pink: shape a white spectrum by 1/sqrt(f) so power density falls as 1/f.
  const std::size_t n = NextPowerOfTwo(static_cast<std::size_t>(length));
  std::vector<std::complex<double>> spec(n);
  for (auto& v : spec) v = gauss(rng);
  Fft(&spec, false);
  spec[0] = 0.0;  // no DC
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double gain = 1.0 / std::sqrt(static_cast<double>(k));
    spec[k] *= gain;
    if (k != n / 2) spec[n - k] *= gain;
  }
  Fft(&spec, true);
  for (int64_t i = 0; i < length; ++i)
    out.samples[static_cast<std::size_t>(i)] = spec[static_cast<std::size_t>(i)].real();
  NormalizeToUnitPower(&out.samples);
  return out;
}

AudioBuffer MixNoise(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db,
                     uint64_t offset_seed) {
  if (clean.sample_rate_hz != noise.sample_rate_hz)
    throw std::runtime_error("MixNoise: sample rate mismatch");
  if (clean.samples.empty() || noise.samples.empty())
    throw std::runtime_error("MixNoise: empty input");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("MixNoise: snr_db must be finite");

  const int64_t n = clean.NumSamples();
  const int64_t m = noise.NumSamples();
  Rng rng(offset_seed);
  int64_t offset;
  if (m >= n) {
    offset = static_cast<int64_t>(std::uniform_int_distribution<uint64_t>(
        0, static_cast<uint64_t>(m - n))(rng));
  } else {
    offset = static_cast<int64_t>(std::uniform_int_distribution<uint64_t>(
        0, static_cast<uint64_t>(m - 1))(rng));
  }
  std::vector<double> snippet(static_cast<std::size_t>(n));
  for (int64_t i = 0; i < n; ++i)
    snippet[static_cast<std::size_t>(i)] = noise.samples[static_cast<std::size_t>((offset + i) % m)];

  const double p_clean = MeanPower(clean.samples);
  const double p_noise = MeanPower(snippet);
  if (p_clean <= 0.0 || p_noise <= 0.0)
    throw std::runtime_error("MixNoise: degenerate power (clean or noise has zero energy)");
  const double alpha = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));

  AudioBuffer out;
  out.sample_rate_hz = clean.sample_rate_hz;
  out.samples.resize(static_cast<std::size_t>(n));
  for (int64_t i = 0; i < n; ++i)
    out.samples[static_cast<std::size_t>(i)] =
        clean.samples[static_cast<std::size_t>(i)] + alpha * snippet[static_cast<std::size_t>(i)];
  return out;
}

AudioBuffer MixNoise(const AudioBuffer& clean, const NoiseSpec& spec) {
  if (spec.kind == NoiseKind::kFile) {
    AudioBuffer noise = ReadWav(spec.path);
    return MixNoise(clean, noise, spec.snr_db, spec.offset_seed);
  }
  AudioBuffer noise = SynthNoise(spec.kind, clean.NumSamples(),
                                 DeriveSeed(spec.offset_seed, spec.name), clean.sample_rate_hz);
  return MixNoise(clean, noise, spec.snr_db, spec.offset_seed);
}

Matrix AddFeatureNoise(const Matrix& frames, double snr_db, uint64_t seed) {
  const double p_sig = frames.array().square().mean();
  if (p_sig <= 0.0) throw std::runtime_error("AddFeatureNoise: zero-power features");
  const double sigma = std::sqrt(p_sig / std::pow(10.0, snr_db / 10.0));
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out = frames;
  for (Eigen::Index t = 0; t < out.rows(); ++t)
    for (Eigen::Index d = 0; d < out.cols(); ++d) out(t, d) += sigma * gauss(rng);
  return out;
}

}  // namespace nmmhmm
