// wordrec/features/feature.h

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

#ifndef WORDREC_FEATURES_FEATURE_H_
#define WORDREC_FEATURES_FEATURE_H_

#include <Eigen/Core>
#include <string>
#include <vector>

namespace wordrec {

// Mono audio with samples normalized to [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 16000;
};

// T x D grid of log mel filterbank energies.
struct FeatureSequence {
  Eigen::MatrixXd frames;     // rows = frames, cols = mel bins (x stacking)
  double frame_shift = 0.01;  // seconds between rows

  int num_frames() const { return static_cast<int>(frames.rows()); }
  int dim() const { return static_cast<int>(frames.cols()); }
};

// Analysis configuration.
//
// Pipeline: Hann window -> radix-2 FFT -> power spectrum -> triangular
// half-overlapping mel filters (2595*log10(1+f/700), spanning 0..Nyquist)
// -> ln(max(energy, log_floor)) -> frame stacking/downsampling.
// With the defaults (25 ms window, 10 ms hop, stack 3) output frames are
// 30 ms apart.
struct FeatureConfig {
  double window_length = 0.025;  // seconds
  double hop = 0.010;            // seconds
  int num_mel_bins = 40;
  int fft_size = 512;            // power of two, >= window samples
  double log_floor = 1e-10;
  int stack_factor = 3;          // consecutive frames concatenated
};

// Raw frame count before stacking: floor((N - window)/hop) + 1.
// Throws InputTooShort when the clip is shorter than one window and
// ConfigError on invalid configuration.
FeatureSequence ExtractFilterbank(const AudioClip& clip,
                                  const FeatureConfig& cfg);

// Concatenates `factor` consecutive rows into one (D' = D*factor) and keeps
// floor(T/factor) output rows; the frame shift grows by the same factor.
FeatureSequence StackFrames(const FeatureSequence& fs, int factor);

// Binary container: magic "FEAT", u32 T, u32 D, f32 frame_shift, then
// T*D little-endian f32 values, row-major.
void WriteFeatureFile(const FeatureSequence& fs, const std::string& path);
FeatureSequence ReadFeatureFile(const std::string& path);

}  // namespace wordrec

#endif  // WORDREC_FEATURES_FEATURE_H_
