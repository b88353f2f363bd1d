// nmmhmm/noise.h

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

#ifndef NMMHMM_NOISE_H_
#define NMMHMM_NOISE_H_

#include <cstdint>
#include <string>

#include "nmmhmm/audio.h"
#include "nmmhmm/common.h"

namespace nmmhmm {

enum class NoiseKind { kWhite, kPink, kFile };

struct NoiseSpec {
  std::string name = "white";  // condition label in reports
  NoiseKind kind = NoiseKind::kWhite;
  std::string path;  // for kFile
  double snr_db = 10.0;
  uint64_t offset_seed = 0;
};

// Seeded synthetic noise at roughly unit power. White is i.i.d. Gaussian;
// pink is spectrally shaped to a 1/f power density.
AudioBuffer SynthNoise(NoiseKind kind, int64_t length, uint64_t seed, int sample_rate_hz = 16000);

// clean + alpha * snippet, where alpha = sqrt(P_clean / (P_noise 10^(snr/10)))
// and the snippet offset is drawn from offset_seed (wrapping cyclically when
// the noise is shorter than the clean signal). Throws on zero-power inputs
// or a sample-rate mismatch.
AudioBuffer MixNoise(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db,
                     uint64_t offset_seed);

// Resolves spec.kind to a concrete noise buffer (loading or synthesizing)
// and mixes it into the clean signal.
AudioBuffer MixNoise(const AudioBuffer& clean, const NoiseSpec& spec);

// Additive Gaussian perturbation of a feature matrix at a target SNR, where
// signal power is the mean squared entry of the sequence. The draw depends
// only on `seed` so that conditions at different SNRs share a noise shape.
Matrix AddFeatureNoise(const Matrix& frames, double snr_db, uint64_t seed);

}  // namespace nmmhmm

#endif  // NMMHMM_NOISE_H_
