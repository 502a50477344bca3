// wordrec/features/wav.h

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

#ifndef WORDREC_FEATURES_WAV_H_
#define WORDREC_FEATURES_WAV_H_

#include <string>

#include "wordrec/features/feature.h"

namespace wordrec {

// 16-bit little-endian PCM, mono only. Samples map to [-1, 1) via /32768.
AudioClip ReadWav(const std::string& path);
void WriteWav(const AudioClip& clip, const std::string& path);

}  // namespace wordrec

#endif  // WORDREC_FEATURES_WAV_H_
