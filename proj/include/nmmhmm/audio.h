// nmmhmm/audio.h

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

#ifndef NMMHMM_AUDIO_H_
#define NMMHMM_AUDIO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace nmmhmm {

// Mono audio, samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  int64_t NumSamples() const { return static_cast<int64_t>(samples.size()); }
};

// Reads a mono 16-bit signed little-endian PCM WAV file.
AudioBuffer ReadWav(const std::string& path);

// Reads the half-open sample range [start, end) of a WAV file.
AudioBuffer ReadWavSegment(const std::string& path, int64_t start, int64_t end);

// Writes mono 16-bit PCM; samples are clipped to [-1, 1).
void WriteWav(const std::string& path, const AudioBuffer& audio);

}  // namespace nmmhmm

#endif  // NMMHMM_AUDIO_H_
