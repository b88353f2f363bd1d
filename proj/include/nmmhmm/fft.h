// nmmhmm/fft.h

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

#ifndef NMMHMM_FFT_H_
#define NMMHMM_FFT_H_

#include <complex>
#include <cstddef>
#include <vector>

namespace nmmhmm {

// In-place iterative radix-2 FFT. data.size() must be a power of two.
// The inverse transform includes the 1/N scaling.
void Fft(std::vector<std::complex<double>>* data, bool inverse);

std::size_t NextPowerOfTwo(std::size_t n);

}  // namespace nmmhmm

#endif  // NMMHMM_FFT_H_
