// wordrec/trainer/trainer.cc

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

#include "wordrec/trainer/trainer.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "wordrec/common/error.h"

namespace wordrec {

BlstmStack InitStack(const StackArch& arch, std::uint64_t seed) {
  BlstmStack stack(arch.depths, arch.hidden, arch.input_dim, arch.num_outputs);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.04, 0.04);
  for (int i = 0; i < stack.NumTensors(); ++i) {
    Eigen::MatrixXd& t = stack.Tensor(i);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = uniform(rng);
    }
    if (stack.TensorIsBias(i)) {
      // Forget-gate rows sit in the second quarter of each 4H bias.
      t.col(0).segment(arch.hidden, arch.hidden).setConstant(1.0);
    }
  }
  return stack;
}

std::pair<double, Eigen::MatrixXd> CeLossGrad(
    const PosteriorGrid& grid, const std::vector<int>& frame_targets) {
  const int t_count = grid.num_frames();
  if (static_cast<int>(frame_targets.size()) != t_count) {
    throw Error("ShapeError", "frame target count != frame count");
  }
  Eigen::MatrixXd grad = grid.values;
  double loss = 0.0;
  for (int t = 0; t < t_count; ++t) {
    int target = frame_targets[t];
    if (target < 0 || target >= grid.num_labels()) {
      throw Error("InvalidLabel",
                  "frame target " + std::to_string(target) + " out of range");
    }
    loss -= std::log(grid.values(t, target));
    grad(t, target) -= 1.0;
  }
  loss /= t_count;
  grad /= static_cast<double>(t_count);
  return {loss, grad};
}

namespace {

// Shared parameters for the asynchronous mode: one slot per tensor, each
// swapped as a unit so concurrent readers never see a torn tensor.
class ParameterStore {
 public:
  explicit ParameterStore(const BlstmStack& init) : shape_(init) {
    slots_.reserve(init.NumTensors());
    for (int i = 0; i < init.NumTensors(); ++i) {
      slots_.push_back(std::make_unique<Slot>());
      slots_.back()->value =
          std::make_shared<const Eigen::MatrixXd>(init.Tensor(i));
    }
  }

  BlstmStack Snapshot() const {
    BlstmStack stack = shape_;
    for (int i = 0; i < stack.NumTensors(); ++i) {
      stack.Tensor(i) = *Load(i);
    }
    return stack;
  }

  void ApplyUpdate(const ParamGradients& grads, double lr) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      std::lock_guard<std::mutex> lock(slots_[i]->mu);
      slots_[i]->value = std::make_shared<const Eigen::MatrixXd>(
          *slots_[i]->value - lr * grads.tensors[i]);
    }
  }

 private:
  struct Slot {
    mutable std::mutex mu;
    std::shared_ptr<const Eigen::MatrixXd> value;
  };

  std::shared_ptr<const Eigen::MatrixXd> Load(int i) const {
    std::lock_guard<std::mutex> lock(slots_[i]->mu);
    return slots_[i]->value;
  }

  BlstmStack shape_;
  std::vector<std::unique_ptr<Slot>> slots_;
};

struct ExampleLoss {
  bool contributed = false;
  double loss = 0.0;
  ParamGradients grads;
};

// Forward + loss + backward for one utterance against a parameter snapshot.
ExampleLoss ComputeExample(const BlstmStack& stack, const TrainExample& ex,
                           LossKind loss_kind) {
  ExampleLoss out;
  if (loss_kind == LossKind::kCtc) {
    CtcLattice lattice(ex.labels);
    if (ex.features.num_frames() < lattice.MinFrames()) return out;
    ForwardCache cache;
    PosteriorGrid grid = Forward(stack, ex.features, &cache);
    CtcResult res = CtcLossGrad(grid, lattice);
    out.loss = res.loss;
    out.grads = Backward(stack, cache, res.dloss_dlogits);
  } else {
    ForwardCache cache;
    PosteriorGrid grid = Forward(stack, ex.features, &cache);
    auto [loss, dlogits] = CeLossGrad(grid, ex.frame_targets);
    out.loss = loss;
    out.grads = Backward(stack, cache, dlogits);
  }
  if (!std::isfinite(out.loss)) {
    throw Error("NanLoss", "non-finite loss on utterance '" + ex.id + "'");
  }
  out.contributed = true;
  return out;
}

double LearningRateAt(const TrainConfig& cfg, std::int64_t step) {
  if (cfg.lr_decay_steps <= 0) return cfg.learning_rate;
  return cfg.learning_rate *
         std::pow(0.5, static_cast<double>((step - 1) / cfg.lr_decay_steps));
}

// Cycles through a shard in seeded shuffled order, reshuffling per pass.
class ShardSampler {
 public:
  ShardSampler(std::vector<int> indices, std::uint64_t seed)
      : indices_(std::move(indices)), rng_(seed) {}

  bool empty() const { return indices_.empty(); }

  int Next() {
    if (at_ == indices_.size()) {
      std::shuffle(indices_.begin(), indices_.end(), rng_);
      at_ = 0;
    }
    return indices_[at_++];
  }

 private:
  std::vector<int> indices_;
  std::mt19937_64 rng_;
  std::size_t at_ = 0;
};

}  // namespace

TrainOutcome Train(const TrainConfig& cfg,
                   const std::vector<TrainExample>& dataset,
                   const BlstmStack& init) {
  if (cfg.worker_count < 1) throw Error("ConfigError", "worker_count >= 1");
  if (cfg.batch_size < 1) throw Error("ConfigError", "batch_size >= 1");
  if (cfg.learning_rate <= 0) throw Error("ConfigError", "learning rate > 0");
  if (dataset.empty()) throw Error("EmptyCorpus", "no training utterances");
  if (cfg.loss == LossKind::kCrossEntropy) {
    for (const auto& ex : dataset) {
      if (static_cast<int>(ex.frame_targets.size()) !=
          ex.features.num_frames()) {
        throw Error("ShapeError",
                    "utterance '" + ex.id + "' lacks frame targets");
      }
    }
  }

  ParameterStore store(init);
  std::atomic<std::int64_t> next_step{1};
  std::atomic<std::int64_t> skipped{0};
  std::mutex metrics_mu;
  std::vector<MetricsRow> metrics;
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto t0 = std::chrono::steady_clock::now();

  auto worker = [&](int worker_id) {
    std::vector<int> shard;
    for (int i = worker_id; i < static_cast<int>(dataset.size());
         i += cfg.worker_count) {
      shard.push_back(i);
    }
    if (shard.empty()) return;
    ShardSampler sampler(std::move(shard),
                         cfg.seed + 0x9E3779B9u * worker_id);
    try {
      while (true) {
        std::int64_t step = next_step.fetch_add(1);
        if (step > cfg.max_steps) break;
        {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (failure) break;
        }
        BlstmStack snapshot = store.Snapshot();
        ParamGradients batch_grad;
        batch_grad.SetZeroLike(snapshot);
        double batch_loss = 0.0;
        int contributed = 0;
        for (int b = 0; b < cfg.batch_size; ++b) {
          const TrainExample& ex = dataset[sampler.Next()];
          ExampleLoss one = ComputeExample(snapshot, ex, cfg.loss);
          if (!one.contributed) {
            skipped.fetch_add(1);
            continue;
          }
          batch_grad.Accumulate(one.grads);
          batch_loss += one.loss;
          ++contributed;
        }
        if (contributed == 0) continue;
        batch_grad.Scale(1.0 / contributed);
        batch_grad.ClipElementwise(cfg.grad_clip);
        store.ApplyUpdate(batch_grad, LearningRateAt(cfg, step));
        {
          double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
          std::lock_guard<std::mutex> lock(metrics_mu);
          metrics.push_back({step, batch_loss / contributed, wall});
        }
        // Hand the core over after every applied step; keeps gradient
        // staleness near the in-flight bound when workers outnumber cores.
        if (cfg.worker_count > 1) std::this_thread::yield();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };

  if (cfg.worker_count == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(cfg.worker_count);
    for (int w = 0; w < cfg.worker_count; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(metrics.begin(), metrics.end(),
            [](const MetricsRow& a, const MetricsRow& b) {
              return a.step < b.step;
            });

  TrainOutcome outcome;
  outcome.checkpoint.stack = store.Snapshot();
  outcome.checkpoint.step = cfg.max_steps;
  outcome.checkpoint.learning_rate = LearningRateAt(cfg, cfg.max_steps);
  outcome.checkpoint.vocab_checksum = cfg.vocab_checksum;
  outcome.metrics = std::move(metrics);
  outcome.skipped_utterances = skipped.load();
  if (!cfg.metrics_path.empty()) {
    WriteMetricsCsv(outcome.metrics, cfg.metrics_path);
  }
  return outcome;
}

double MeanCtcLoss(const BlstmStack& stack,
                   const std::vector<TrainExample>& dataset) {
  double total = 0.0;
  int counted = 0;
  for (const auto& ex : dataset) {
    CtcLattice lattice(ex.labels);
    if (ex.features.num_frames() < lattice.MinFrames()) continue;
    PosteriorGrid grid = Forward(stack, ex.features);
    total += CtcLossGrad(grid, lattice).loss;
    ++counted;
  }
  if (counted == 0) throw Error("EmptyCorpus", "no alignable utterances");
  return total / counted;
}

void WriteMetricsCsv(const std::vector<MetricsRow>& metrics,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  os << "step,loss,wall_time\n";
  os.precision(12);
  for (const auto& row : metrics) {
    os << row.step << ',' << row.loss << ',' << row.wall_time << '\n';
  }
}

}  // namespace wordrec
