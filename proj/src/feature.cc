// src/feature.cc

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
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "nmmhmm/fft.h"

namespace nmmhmm {

namespace {

double HzToMel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

}  // namespace

int FeatureConfig::WindowSamples() const {
  return static_cast<int>(std::lround(window_s * sample_rate_hz));
}

int FeatureConfig::ShiftSamples() const {
  return static_cast<int>(std::lround(shift_s * sample_rate_hz));
}

uint64_t FeatureConfig::Fingerprint() const {
  char buf[256];
  int n = std::snprintf(buf, sizeof(buf), "sr=%d;win=%.17g;shift=%.17g;pre=%.17g;mel=%d;ceps=%d;lo=%.17g;hi=%.17g;floor=%.17g;dw=%d;deltas=%d",
                        sample_rate_hz, window_s, shift_s, preemphasis, num_mel_bins, num_ceps,
                        low_freq_hz, high_freq_hz, log_floor, delta_window, deltas ? 1 : 0);
  return Fnv1a64(std::string_view(buf, static_cast<std::size_t>(n)));
}

std::vector<Vector> FrameSignal(const AudioBuffer& audio, double window_s, double shift_s,
                                double preemphasis) {
  const int64_t n = audio.NumSamples();
  const int w = static_cast<int>(std::lround(window_s * audio.sample_rate_hz));
  const int s = static_cast<int>(std::lround(shift_s * audio.sample_rate_hz));
  if (w < 1 || s < 1) throw std::invalid_argument("FrameSignal: window and shift must be >= 1 sample");
  if (n < w)
    throw std::runtime_error("FrameSignal: signal too short (" + std::to_string(n) +
                             " samples, window " + std::to_string(w) + ")");
  for (double v : audio.samples)
    if (!std::isfinite(v)) throw std::runtime_error("FrameSignal: non-finite sample");

  std::vector<double> emphasized(audio.samples.size());
  emphasized[0] = audio.samples[0] - preemphasis * audio.samples[0];
  for (std::size_t i = 1; i < audio.samples.size(); ++i)
    emphasized[i] = audio.samples[i] - preemphasis * audio.samples[i - 1];

  Vector window(w);
  for (int i = 0; i < w; ++i)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (w - 1));

  const int64_t num_frames = (n - w) / s + 1;
  std::vector<Vector> frames;
  frames.reserve(static_cast<std::size_t>(num_frames));
  for (int64_t f = 0; f < num_frames; ++f) {
    Vector frame(w);
    const int64_t off = f * s;
    for (int i = 0; i < w; ++i) frame[i] = emphasized[static_cast<std::size_t>(off + i)] * window[i];
    frames.push_back(std::move(frame));
  }
  return frames;
}

Matrix DctMatrix(int rows, int n) {
  if (rows < 1 || rows > n) throw std::invalid_argument("DctMatrix: need 1 <= rows <= n");
  Matrix m(rows, n);
  const double norm0 = std::sqrt(1.0 / n);
  const double norm = std::sqrt(2.0 / n);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = (i == 0 ? norm0 : norm) * std::cos(M_PI * i * (2 * j + 1) / (2.0 * n));
  return m;
}

Matrix MelFilterbank(const FeatureConfig& config, int num_fft_bins) {
  const double nyquist = config.sample_rate_hz / 2.0;
  const double lo = config.low_freq_hz;
  const double hi = config.high_freq_hz > 0.0 ? config.high_freq_hz : nyquist;
  if (!(lo >= 0.0 && lo < hi && hi <= nyquist))
    throw std::invalid_argument("MelFilterbank: bad frequency range");
  const int m = config.num_mel_bins;
  // m + 2 equally spaced points on the mel scale define the triangle edges.
  std::vector<double> edges(static_cast<std::size_t>(m) + 2);
  const double mel_lo = HzToMel(lo), mel_hi = HzToMel(hi);
  for (int i = 0; i < m + 2; ++i)
    edges[static_cast<std::size_t>(i)] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (m + 1));

  const int nfft = 2 * (num_fft_bins - 1);
  Matrix bank = Matrix::Zero(m, num_fft_bins);
  for (int k = 0; k < num_fft_bins; ++k) {
    const double f = static_cast<double>(k) * config.sample_rate_hz / nfft;
    for (int j = 0; j < m; ++j) {
      const double left = edges[static_cast<std::size_t>(j)];
      const double center = edges[static_cast<std::size_t>(j) + 1];
      const double right = edges[static_cast<std::size_t>(j) + 2];
      if (f > left && f < right)
        bank(j, k) = f <= center ? (f - left) / (center - left) : (right - f) / (right - center);
    }
  }
  return bank;
}

Matrix Mfcc(const AudioBuffer& audio, const FeatureConfig& config) {
  if (config.num_mel_bins < config.num_ceps)
    throw std::invalid_argument("Mfcc: num_mel_bins must be >= num_ceps");
  auto frames = FrameSignal(audio, config.window_s, config.shift_s, config.preemphasis);
  const int w = static_cast<int>(frames[0].size());
  const std::size_t nfft = NextPowerOfTwo(static_cast<std::size_t>(w));
  const int num_bins = static_cast<int>(nfft / 2) + 1;
  const Matrix bank = MelFilterbank(config, num_bins);
  const Matrix dct = DctMatrix(config.num_ceps, config.num_mel_bins);

  Matrix out(static_cast<Eigen::Index>(frames.size()), config.num_ceps);
  std::vector<std::complex<double>> spectrum(nfft);
  Vector power(num_bins);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t i = 0; i < nfft; ++i)
      spectrum[i] = i < static_cast<std::size_t>(w) ? frames[f][static_cast<Eigen::Index>(i)] : 0.0;
    Fft(&spectrum, false);
    for (int k = 0; k < num_bins; ++k) power[k] = std::norm(spectrum[static_cast<std::size_t>(k)]);
    Vector mel = bank * power;
    for (int j = 0; j < config.num_mel_bins; ++j)
      mel[j] = std::log(std::max(mel[j], config.log_floor));
    out.row(static_cast<Eigen::Index>(f)) = (dct * mel).transpose();
  }
  return out;
}

Matrix AddDeltas(const Matrix& feats, int half_window) {
  if (half_window < 1) throw std::invalid_argument("AddDeltas: half_window must be >= 1");
  const Eigen::Index t_max = feats.rows(), d = feats.cols();
  double denom = 0.0;
  for (int n = 1; n <= half_window; ++n) denom += 2.0 * n * n;

  auto regress = [&](const Matrix& in) {
    Matrix out(t_max, d);
    for (Eigen::Index t = 0; t < t_max; ++t) {
      Vector acc = Vector::Zero(d);
      for (int n = 1; n <= half_window; ++n) {
        const Eigen::Index fwd = std::min<Eigen::Index>(t + n, t_max - 1);
        const Eigen::Index bwd = std::max<Eigen::Index>(t - n, 0);
        acc += n * (in.row(fwd) - in.row(bwd)).transpose();
      }
      out.row(t) = (acc / denom).transpose();
    }
    return out;
  };

  Matrix delta = regress(feats);
  Matrix delta2 = regress(delta);
  Matrix out(t_max, 3 * d);
  out << feats, delta, delta2;
  return out;
}

FeatureSequence ExtractFeatures(const AudioBuffer& audio, const FeatureConfig& config,
                                std::string source_id) {
  FeatureSequence seq;
  seq.frames = Mfcc(audio, config);
  if (config.deltas) seq.frames = AddDeltas(seq.frames, config.delta_window);
  seq.frame_shift_s = config.shift_s;
  seq.source_id = std::move(source_id);
  return seq;
}

}  // namespace nmmhmm
