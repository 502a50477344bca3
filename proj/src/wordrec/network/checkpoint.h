// wordrec/network/checkpoint.h

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

#ifndef WORDREC_NETWORK_CHECKPOINT_H_
#define WORDREC_NETWORK_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "wordrec/network/blstm.h"

namespace wordrec {

// Model checkpoint.
//
// Binary file: magic "NSRC", u32 format version, u32 depths, u32 hidden,
// u32 input_dim, u32 num_outputs, then all parameter tensors as
// little-endian f64 in the BlstmStack serialization order (row-major within
// each tensor). A JSON sidecar at "<path>.json" carries the hyperparameters
// again plus training step, learning rate, and the vocabulary checksum.
struct Checkpoint {
  BlstmStack stack;
  std::uint64_t step = 0;
  double learning_rate = 0.0;
  std::string vocab_checksum;
};

constexpr std::uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

// FNV-1a 64 over "word\n" for every vocabulary word in id order, formatted
// "fnv1a64:<16 hex digits>". Defined here so checkpoints and vocabularies
// agree on the convention.
std::string ChecksumLines(const std::vector<std::string>& lines);

}  // namespace wordrec

#endif  // WORDREC_NETWORK_CHECKPOINT_H_
