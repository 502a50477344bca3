// wordrec/trainer/trainer.h

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

#ifndef WORDREC_TRAINER_TRAINER_H_
#define WORDREC_TRAINER_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "wordrec/ctc/ctc.h"
#include "wordrec/network/blstm.h"
#include "wordrec/network/checkpoint.h"

namespace wordrec {

enum class LossKind { kCtc, kCrossEntropy };

struct TrainConfig {
  LossKind loss = LossKind::kCtc;
  double learning_rate = 0.05;
  int lr_decay_steps = 0;  // halve every N steps; 0 keeps it constant
  int worker_count = 1;
  int batch_size = 4;
  int max_steps = 1000;
  std::uint64_t seed = 1;
  std::string vocab_checksum;
  std::string metrics_path;  // CSV "step,loss,wall_time"; empty disables

  // Fixed by convention, recorded here so the values travel with configs.
  double grad_clip = 1.0;            // elementwise, applied before the update
  double init_low = -0.04, init_high = 0.04;
};

struct TrainExample {
  std::string id;
  FeatureSequence features;
  LabelSequence labels;
  std::vector<int> frame_targets;  // required for cross-entropy training
};

struct MetricsRow {
  std::int64_t step = 0;
  double loss = 0.0;
  double wall_time = 0.0;  // seconds since training started
};

struct TrainOutcome {
  Checkpoint checkpoint;
  std::vector<MetricsRow> metrics;
  std::int64_t skipped_utterances = 0;  // unalignable in their frame budget
};

// Architecture description for fresh stacks.
struct StackArch {
  int depths = 2;
  int hidden = 32;
  int input_dim = 1;
  int num_outputs = 2;
};

// Fresh parameters: every weight drawn uniformly from (-0.04, 0.04),
// deterministic per seed, except forget-gate biases which start at 1.0.
BlstmStack InitStack(const StackArch& arch, std::uint64_t seed);

// Frame-level cross-entropy against one target id (word or blank) per frame:
// loss = -(1/T) sum_t ln y[t][target_t], gradient w.r.t. logits
// (softmax - one-hot)/T. Throws InvalidLabel for out-of-range targets and
// ShapeError when the target count differs from T.
std::pair<double, Eigen::MatrixXd> CeLossGrad(
    const PosteriorGrid& grid, const std::vector<int>& frame_targets);

// Minibatch SGD from `init`. One step: forward + loss gradient + backward on
// `batch_size` utterances, gradients averaged over the contributing ones,
// clipped elementwise to [-grad_clip, grad_clip], then applied.
//
// worker_count == 1 is bit-deterministic per seed. With more workers, each
// worker owns the shard of utterances with index % worker_count == worker
// and races read-modify-write updates against a shared store: every tensor
// swap is atomic (no torn tensors) but reads may be stale by the number of
// in-flight steps; results are nondeterministic by contract.
//
// Unalignable utterances are skipped and counted; a non-finite loss aborts
// with NanLoss.
TrainOutcome Train(const TrainConfig& cfg,
                   const std::vector<TrainExample>& dataset,
                   const BlstmStack& init);

// Mean CTC loss of the stack over a dataset (evaluation helper; skips
// unalignable utterances).
double MeanCtcLoss(const BlstmStack& stack,
                   const std::vector<TrainExample>& dataset);

void WriteMetricsCsv(const std::vector<MetricsRow>& metrics,
                     const std::string& path);

}  // namespace wordrec

#endif  // WORDREC_TRAINER_TRAINER_H_
