// wordrec/network/pipeline.h

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

#ifndef WORDREC_NETWORK_PIPELINE_H_
#define WORDREC_NETWORK_PIPELINE_H_

#include <cstdint>
#include <vector>

#include "wordrec/network/blstm.h"

namespace wordrec {

// One executed pipeline task: utterance `utterance` ran stage `stage`
// (depths 0..L-1, then stage L = output layer) on `thread`.
struct PipelineTraceEntry {
  int utterance = 0;
  int stage = 0;
  int thread = 0;
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
};

// Batched inference with the LSTM depths pipelined across a worker pool:
// stage d of utterance i can run while stage d+1 handles utterance i-1.
// Outputs are bit-identical to calling Forward per utterance regardless of
// worker_count (each task runs the same code on the same inputs; scheduling
// only changes timing). worker_count < 1 is a ConfigError.
std::vector<PosteriorGrid> ForwardPipelined(
    const BlstmStack& stack, const std::vector<FeatureSequence>& batch,
    int worker_count, std::vector<PipelineTraceEntry>* trace = nullptr);

}  // namespace wordrec

#endif  // WORDREC_NETWORK_PIPELINE_H_
