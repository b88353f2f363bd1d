// src/audio.cc

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

#include "nmmhmm/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nmmhmm {

namespace {

uint32_t ReadU32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t ReadU16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void WriteU32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void WriteU16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

struct WavInfo {
  int sample_rate = 0;
  int64_t num_samples = 0;
  std::streampos data_pos;
};

WavInfo ParseHeader(std::ifstream& in, const std::string& path) {
  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw std::runtime_error("not a RIFF file: " + path);
  ReadU32(in);  // riff size
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw std::runtime_error("not a WAVE file: " + path);

  WavInfo info;
  bool have_fmt = false;
  uint16_t bits = 0;
  while (in.read(tag, 4)) {
    uint32_t chunk_size = ReadU32(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      uint16_t format = ReadU16(in);
      uint16_t channels = ReadU16(in);
      info.sample_rate = static_cast<int>(ReadU32(in));
      ReadU32(in);  // byte rate
      ReadU16(in);  // block align
      bits = ReadU16(in);
      if (format != 1) throw std::runtime_error("unsupported WAV format (need PCM): " + path);
      if (channels != 1) throw std::runtime_error("unsupported WAV (need mono): " + path);
      if (bits != 16) throw std::runtime_error("unsupported WAV (need 16-bit): " + path);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw std::runtime_error("WAV data chunk before fmt: " + path);
      info.num_samples = static_cast<int64_t>(chunk_size) / 2;
      info.data_pos = in.tellg();
      return info;
    } else {
      // Skip unknown chunks (pad to even size per RIFF).
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("WAV file has no data chunk: " + path);
}

std::vector<double> ReadPcmRange(std::ifstream& in, const WavInfo& info, int64_t start,
                                 int64_t end, const std::string& path) {
  if (start < 0 || end > info.num_samples || start >= end)
    throw std::runtime_error("WAV segment [" + std::to_string(start) + ", " +
                             std::to_string(end) + ") out of range for " + path + " with " +
                             std::to_string(info.num_samples) + " samples");
  in.seekg(info.data_pos + static_cast<std::streamoff>(2 * start));
  const int64_t n = end - start;
  std::vector<int16_t> raw(static_cast<std::size_t>(n));
  in.read(reinterpret_cast<char*>(raw.data()), 2 * n);
  if (!in) throw std::runtime_error("short read in " + path);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = raw[i] / 32768.0;
  return out;
}

}  // namespace

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open audio file: " + path);
  WavInfo info = ParseHeader(in, path);
  AudioBuffer buf;
  buf.sample_rate_hz = info.sample_rate;
  buf.samples = ReadPcmRange(in, info, 0, info.num_samples, path);
  return buf;
}

AudioBuffer ReadWavSegment(const std::string& path, int64_t start, int64_t end) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open audio file: " + path);
  WavInfo info = ParseHeader(in, path);
  AudioBuffer buf;
  buf.sample_rate_hz = info.sample_rate;
  buf.samples = ReadPcmRange(in, info, start, end, path);
  return buf;
}

void WriteWav(const std::string& path, const AudioBuffer& audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write audio file: " + path);
  const uint32_t n = static_cast<uint32_t>(audio.samples.size());
  out.write("RIFF", 4);
  WriteU32(out, 36 + 2 * n);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  WriteU32(out, 16);
  WriteU16(out, 1);  // PCM
  WriteU16(out, 1);  // mono
  WriteU32(out, static_cast<uint32_t>(audio.sample_rate_hz));
  WriteU32(out, static_cast<uint32_t>(audio.sample_rate_hz * 2));
  WriteU16(out, 2);
  WriteU16(out, 16);
  out.write("data", 4);
  WriteU32(out, 2 * n);
  for (double s : audio.samples) {
    double clipped = std::clamp(s, -1.0, 32767.0 / 32768.0);
    auto v = static_cast<int16_t>(std::lrint(clipped * 32768.0));
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(b, 2);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace nmmhmm
