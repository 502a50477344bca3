// wordrec/network/pipeline.cc

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

#include "wordrec/network/pipeline.h"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "wordrec/common/error.h"

namespace wordrec {

std::vector<PosteriorGrid> ForwardPipelined(
    const BlstmStack& stack, const std::vector<FeatureSequence>& batch,
    int worker_count, std::vector<PipelineTraceEntry>* trace) {
  if (worker_count < 1) throw Error("ConfigError", "worker_count must be >= 1");
  for (const FeatureSequence& x : batch) {
    if (x.num_frames() == 0) throw Error("EmptyInput", "empty feature sequence");
    if (x.dim() != stack.input_dim()) {
      throw Error("ShapeError", "feature dim mismatch in pipelined batch");
    }
  }

  const int num_utts = static_cast<int>(batch.size());
  const int num_stages = stack.depths() + 1;  // depths, then output layer
  std::vector<PosteriorGrid> outputs(num_utts);
  if (num_utts == 0) return outputs;

  std::vector<Eigen::MatrixXd> stage_io(num_utts);
  for (int u = 0; u < num_utts; ++u) stage_io[u] = batch[u].frames;

  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::pair<int, int>> ready;  // (utterance, stage)
  for (int u = 0; u < num_utts; ++u) ready.emplace_back(u, 0);
  int remaining = num_utts * num_stages;
  std::exception_ptr failure;

  const auto t0 = std::chrono::steady_clock::now();
  auto now_ns = [&t0] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  auto worker = [&](int thread_id) {
    while (true) {
      std::pair<int, int> task;
      {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] {
          return !ready.empty() || remaining == 0 || failure != nullptr;
        });
        if (remaining == 0 || failure != nullptr) return;
        task = ready.front();
        ready.pop_front();
      }
      auto [u, stage] = task;
      std::int64_t start = now_ns();
      try {
        if (stage < stack.depths()) {
          Eigen::MatrixXd next = RunDepth(stack, stage, stage_io[u]);
          stage_io[u] = std::move(next);
        } else {
          outputs[u] = RunOutputLayer(stack, stage_io[u]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        cv.notify_all();
        return;
      }
      std::int64_t end = now_ns();
      {
        std::lock_guard<std::mutex> lock(mu);
        if (trace) {
          trace->push_back({u, stage, thread_id, start, end});
        }
        --remaining;
        if (stage + 1 < num_stages) ready.emplace_back(u, stage + 1);
        cv.notify_all();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker, i);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

}  // namespace wordrec
