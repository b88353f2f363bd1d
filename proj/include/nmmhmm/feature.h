// nmmhmm/feature.h

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

#ifndef NMMHMM_FEATURE_H_
#define NMMHMM_FEATURE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nmmhmm/audio.h"
#include "nmmhmm/common.h"

namespace nmmhmm {

struct FeatureConfig {
  int sample_rate_hz = 16000;
  double window_s = 0.025;
  double shift_s = 0.010;
  double preemphasis = 0.97;
  int num_mel_bins = 26;
  int num_ceps = 13;
  double low_freq_hz = 0.0;
  double high_freq_hz = 0.0;  // 0 means Nyquist
  double log_floor = 1e-10;
  int delta_window = 2;
  bool deltas = true;  // append velocity and acceleration blocks

  int WindowSamples() const;
  int ShiftSamples() const;
  int FeatureDim() const { return deltas ? 3 * num_ceps : num_ceps; }

  // Stable 64-bit hash of the canonical field serialization; keys feature
  // caches, so any field change must change the value.
  uint64_t Fingerprint() const;
};

struct FeatureSequence {
  Matrix frames;  // T x D, rows are per-frame feature vectors
  double frame_shift_s = 0.010;
  std::string source_id;

  Eigen::Index NumFrames() const { return frames.rows(); }
  Eigen::Index Dim() const { return frames.cols(); }
};

// Splits audio into pre-emphasized, Hamming-tapered frames.
// Frame count is floor((N - W) / S) + 1; throws if the signal is shorter
// than one window.
std::vector<Vector> FrameSignal(const AudioBuffer& audio, double window_s, double shift_s,
                                double preemphasis = 0.97);

// 13 cepstral coefficients per frame: power spectrum -> mel filterbank ->
// floored log -> orthonormal DCT-II. c0 is retained.
Matrix Mfcc(const AudioBuffer& audio, const FeatureConfig& config);

// Appends delta and delta-delta blocks computed by windowed linear
// regression over +/-half_window frames with edge replication.
Matrix AddDeltas(const Matrix& feats, int half_window = 2);

// Full pipeline: Mfcc followed by AddDeltas when config.deltas is set.
FeatureSequence ExtractFeatures(const AudioBuffer& audio, const FeatureConfig& config,
                                std::string source_id = {});

// Orthonormal DCT-II matrix (rows x n), rows <= n.
Matrix DctMatrix(int rows, int n);

// Triangular mel filterbank, num_mel x num_bins, over [low_freq, high_freq].
Matrix MelFilterbank(const FeatureConfig& config, int num_fft_bins);

}  // namespace nmmhmm

#endif  // NMMHMM_FEATURE_H_
