// wordrec/features/wav.cc

// Copyright 2026 The Wordrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wordrec/features/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "wordrec/common/binary-io.h"
#include "wordrec/common/error.h"

namespace wordrec {

AudioClip ReadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  ExpectMagic(is, "RIFF", path);
  ReadScalar<std::uint32_t>(is, "riff size");
  ExpectMagic(is, "WAVE", path);

  AudioClip clip;
  bool got_fmt = false;
  std::uint16_t bits = 0;
  while (is) {
    char id[4];
    is.read(id, 4);
    if (!is) break;
    auto size = ReadScalar<std::uint32_t>(is, "chunk size");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      auto format = ReadScalar<std::uint16_t>(is, "format tag");
      auto channels = ReadScalar<std::uint16_t>(is, "channels");
      auto rate = ReadScalar<std::uint32_t>(is, "sample rate");
      ReadScalar<std::uint32_t>(is, "byte rate");
      ReadScalar<std::uint16_t>(is, "block align");
      bits = ReadScalar<std::uint16_t>(is, "bits per sample");
      if (format != 1) throw Error("FormatError", "only PCM WAV supported");
      if (channels != 1) throw Error("FormatError", "only mono WAV supported");
      if (bits != 16) throw Error("FormatError", "only 16-bit WAV supported");
      clip.sample_rate = static_cast<int>(rate);
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      got_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!got_fmt) throw Error("FormatError", "data chunk before fmt chunk");
      std::uint32_t samples = size / 2;
      clip.samples.resize(samples);
      for (std::uint32_t i = 0; i < samples; ++i) {
        auto v = ReadScalar<std::int16_t>(is, "sample");
        clip.samples[i] = v / 32768.0;
      }
      return clip;
    } else {
      is.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
    }
  }
  throw Error("FormatError", "no data chunk in " + path);
}

void WriteWav(const AudioClip& clip, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  const auto num_samples = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = num_samples * 2;
  WriteMagic(os, "RIFF");
  WriteScalar<std::uint32_t>(os, 36 + data_bytes);
  WriteMagic(os, "WAVE");
  WriteMagic(os, "fmt ");
  WriteScalar<std::uint32_t>(os, 16);
  WriteScalar<std::uint16_t>(os, 1);  // PCM
  WriteScalar<std::uint16_t>(os, 1);  // mono
  WriteScalar<std::uint32_t>(os, clip.sample_rate);
  WriteScalar<std::uint32_t>(os, clip.sample_rate * 2);
  WriteScalar<std::uint16_t>(os, 2);
  WriteScalar<std::uint16_t>(os, 16);
  WriteMagic(os, "data");
  WriteScalar<std::uint32_t>(os, data_bytes);
  for (double s : clip.samples) {
    double scaled = std::clamp(s, -1.0, 1.0) * 32767.0;
    WriteScalar<std::int16_t>(os, static_cast<std::int16_t>(std::lround(scaled)));
  }
  if (!os) throw Error("IoError", "write failed: " + path);
}

}  // namespace wordrec
