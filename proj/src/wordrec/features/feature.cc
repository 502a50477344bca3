// wordrec/features/feature.cc

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

#include "wordrec/features/feature.h"

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>

#include "wordrec/common/binary-io.h"
#include "wordrec/common/error.h"

namespace wordrec {

namespace {

constexpr double kPi = std::numbers::pi;

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT. Size must be a power of two.
void Fft(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * kPi / static_cast<double>(len);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double MelScale(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

// Triangular half-overlapping filters over fft_size/2+1 power-spectrum bins,
// with edges equally spaced on the mel scale from 0 Hz to Nyquist.
Eigen::MatrixXd MelFilterbank(int num_bins, int fft_size, int sample_rate) {
  const int num_fft_bins = fft_size / 2 + 1;
  const double mel_high = MelScale(sample_rate / 2.0);
  const double mel_step = mel_high / (num_bins + 1);
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(num_bins, num_fft_bins);
  const double bin_width = static_cast<double>(sample_rate) / fft_size;
  for (int b = 0; b < num_bins; ++b) {
    double left = b * mel_step;
    double center = (b + 1) * mel_step;
    double right = (b + 2) * mel_step;
    for (int k = 0; k < num_fft_bins; ++k) {
      double mel = MelScale(k * bin_width);
      if (mel <= left || mel >= right) continue;
      weights(b, k) = mel <= center ? (mel - left) / (center - left)
                                    : (right - mel) / (right - center);
    }
  }
  return weights;
}

void ValidateConfig(const FeatureConfig& cfg, int window_samples) {
  if (cfg.window_length <= 0 || cfg.hop <= 0) {
    throw Error("ConfigError", "window and hop must be positive");
  }
  if (cfg.num_mel_bins < 1) {
    throw Error("ConfigError", "num_mel_bins must be >= 1");
  }
  if (!IsPowerOfTwo(cfg.fft_size)) {
    throw Error("ConfigError", "fft_size must be a power of two");
  }
  if (cfg.fft_size < window_samples) {
    throw Error("ConfigError", "fft_size smaller than the analysis window");
  }
  if (cfg.log_floor <= 0) {
    throw Error("ConfigError", "log_floor must be positive");
  }
  if (cfg.stack_factor < 1) {
    throw Error("ConfigError", "stack_factor must be >= 1");
  }
}

}  // namespace

FeatureSequence ExtractFilterbank(const AudioClip& clip,
                                  const FeatureConfig& cfg) {
  if (clip.sample_rate <= 0) {
    throw Error("ConfigError", "sample_rate must be positive");
  }
  const int window = static_cast<int>(std::lround(cfg.window_length *
                                                  clip.sample_rate));
  const int hop = static_cast<int>(std::lround(cfg.hop * clip.sample_rate));
  ValidateConfig(cfg, window);
  if (hop < 1 || window < 1) {
    throw Error("ConfigError", "window/hop shorter than one sample");
  }
  const auto n = static_cast<std::int64_t>(clip.samples.size());
  if (n < window) {
    throw Error("InputTooShort", "clip shorter than one analysis window");
  }
  const int num_frames = static_cast<int>((n - window) / hop) + 1;

  Eigen::VectorXd hann(window);
  for (int i = 0; i < window; ++i) {
    hann[i] = window == 1
                  ? 1.0
                  : 0.5 - 0.5 * std::cos(2.0 * kPi * i / (window - 1));
  }
  const Eigen::MatrixXd mel =
      MelFilterbank(cfg.num_mel_bins, cfg.fft_size, clip.sample_rate);

  FeatureSequence out;
  out.frames.resize(num_frames, cfg.num_mel_bins);
  out.frame_shift = cfg.hop;
  std::vector<std::complex<double>> buffer(cfg.fft_size);
  Eigen::VectorXd power(cfg.fft_size / 2 + 1);
  for (int t = 0; t < num_frames; ++t) {
    const double* src = clip.samples.data() + static_cast<std::size_t>(t) * hop;
    for (int i = 0; i < window; ++i) buffer[i] = src[i] * hann[i];
    for (int i = window; i < cfg.fft_size; ++i) buffer[i] = 0.0;
    Fft(buffer);
    for (int k = 0; k <= cfg.fft_size / 2; ++k) power[k] = std::norm(buffer[k]);
    Eigen::VectorXd energy = mel * power;
    for (int b = 0; b < cfg.num_mel_bins; ++b) {
      out.frames(t, b) = std::log(std::max(energy[b], cfg.log_floor));
    }
  }
  return cfg.stack_factor == 1 ? out : StackFrames(out, cfg.stack_factor);
}

FeatureSequence StackFrames(const FeatureSequence& fs, int factor) {
  if (factor < 1) throw Error("ConfigError", "stack factor must be >= 1");
  if (factor == 1) return fs;
  const int out_frames = fs.num_frames() / factor;
  const int dim = fs.dim();
  FeatureSequence out;
  out.frames.resize(out_frames, dim * factor);
  out.frame_shift = fs.frame_shift * factor;
  for (int t = 0; t < out_frames; ++t) {
    for (int j = 0; j < factor; ++j) {
      out.frames.block(t, j * dim, 1, dim) = fs.frames.row(t * factor + j);
    }
  }
  return out;
}

void WriteFeatureFile(const FeatureSequence& fs, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  WriteMagic(os, "FEAT");
  WriteScalar<std::uint32_t>(os, fs.num_frames());
  WriteScalar<std::uint32_t>(os, fs.dim());
  WriteScalar<float>(os, static_cast<float>(fs.frame_shift));
  for (int t = 0; t < fs.num_frames(); ++t) {
    for (int d = 0; d < fs.dim(); ++d) {
      WriteScalar<float>(os, static_cast<float>(fs.frames(t, d)));
    }
  }
  if (!os) throw Error("IoError", "write failed: " + path);
}

FeatureSequence ReadFeatureFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  ExpectMagic(is, "FEAT", path);
  auto t = ReadScalar<std::uint32_t>(is, "frame count");
  auto d = ReadScalar<std::uint32_t>(is, "dimension");
  auto shift = ReadScalar<float>(is, "frame shift");
  FeatureSequence fs;
  fs.frames.resize(t, d);
  fs.frame_shift = shift;
  for (std::uint32_t i = 0; i < t; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      fs.frames(i, j) = ReadScalar<float>(is, "feature value");
    }
  }
  return fs;
}

}  // namespace wordrec
