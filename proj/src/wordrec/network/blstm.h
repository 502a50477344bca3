// wordrec/network/blstm.h

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

#ifndef WORDREC_NETWORK_BLSTM_H_
#define WORDREC_NETWORK_BLSTM_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "wordrec/features/feature.h"

namespace wordrec {

// Cell states are clamped to this range after every update; the backward
// pass zeroes the gradient where the pre-clip value left the range.
constexpr double kCellClip = 50.0;

// Per-frame posteriors over the blank (column 0) plus V words.
struct PosteriorGrid {
  Eigen::MatrixXd values;  // T x (V+1), rows sum to 1

  int num_frames() const { return static_cast<int>(values.rows()); }
  int num_labels() const { return static_cast<int>(values.cols()); }
};

// Deep bidirectional LSTM with a softmax output layer.
//
// Layer geometry: depth 0 consumes the input features; each deeper layer
// consumes the concatenated forward+backward outputs (2*hidden) of the depth
// below; the output layer maps the top concatenation to V+1 logits.
//
// Parameter tensors live in a flat list in a fixed serialization order:
//   for depth d = 0..L-1, for direction in {forward, backward}:
//     W_x (4H x in_d), W_h (4H x H), bias (4H x 1)
//   then W_out (K x 2H), b_out (K x 1).
// Gate rows within 4H blocks are ordered input, forget, cell, output.
// No peepholes, no projection.
class BlstmStack {
 public:
  BlstmStack() = default;
  BlstmStack(int depths, int hidden, int input_dim, int num_outputs);

  int depths() const { return depths_; }
  int hidden() const { return hidden_; }
  int input_dim() const { return input_dim_; }
  int num_outputs() const { return num_outputs_; }
  int LayerInputDim(int depth) const {
    return depth == 0 ? input_dim_ : 2 * hidden_;
  }

  enum Direction { kForward = 0, kBackward = 1 };

  Eigen::MatrixXd& InputWeights(int depth, Direction dir) {
    return tensors_[TensorIndex(depth, dir, 0)];
  }
  const Eigen::MatrixXd& InputWeights(int depth, Direction dir) const {
    return tensors_[TensorIndex(depth, dir, 0)];
  }
  Eigen::MatrixXd& RecurrentWeights(int depth, Direction dir) {
    return tensors_[TensorIndex(depth, dir, 1)];
  }
  const Eigen::MatrixXd& RecurrentWeights(int depth, Direction dir) const {
    return tensors_[TensorIndex(depth, dir, 1)];
  }
  Eigen::MatrixXd& Bias(int depth, Direction dir) {
    return tensors_[TensorIndex(depth, dir, 2)];
  }
  const Eigen::MatrixXd& Bias(int depth, Direction dir) const {
    return tensors_[TensorIndex(depth, dir, 2)];
  }
  Eigen::MatrixXd& OutputWeights() { return tensors_[6 * depths_]; }
  const Eigen::MatrixXd& OutputWeights() const { return tensors_[6 * depths_]; }
  Eigen::MatrixXd& OutputBias() { return tensors_[6 * depths_ + 1]; }
  const Eigen::MatrixXd& OutputBias() const {
    return tensors_[6 * depths_ + 1];
  }

  int NumTensors() const { return static_cast<int>(tensors_.size()); }
  Eigen::MatrixXd& Tensor(int i) { return tensors_[i]; }
  const Eigen::MatrixXd& Tensor(int i) const { return tensors_[i]; }
  // True when tensor i is a forget-gate-carrying bias vector.
  bool TensorIsBias(int i) const { return i < 6 * depths_ && i % 3 == 2; }

  std::int64_t NumParams() const;
  Eigen::VectorXd FlattenParams() const;
  void UnflattenParams(const Eigen::VectorXd& flat);

  bool SameShape(const BlstmStack& other) const;

 private:
  int TensorIndex(int depth, Direction dir, int which) const {
    return (depth * 2 + dir) * 3 + which;
  }

  int depths_ = 0;
  int hidden_ = 0;
  int input_dim_ = 0;
  int num_outputs_ = 0;
  std::vector<Eigen::MatrixXd> tensors_;
};

// Same tensor list layout as the stack parameters.
struct ParamGradients {
  std::vector<Eigen::MatrixXd> tensors;

  void SetZeroLike(const BlstmStack& stack);
  void Accumulate(const ParamGradients& other);
  void Scale(double factor);
  void ClipElementwise(double limit);
};

// Everything the backward pass needs from a forward pass.
struct ForwardCache {
  struct DirectionCache {
    // T x H each: gate activations, cell state pre/post clip, outputs.
    Eigen::MatrixXd input_gate, forget_gate, cell_input, output_gate;
    Eigen::MatrixXd cell_raw, cell, h;
  };
  struct DepthCache {
    DirectionCache dir[2];
  };
  Eigen::MatrixXd input;               // T x D copy of the features
  std::vector<DepthCache> depths;      // per depth
  std::vector<Eigen::MatrixXd> hcat;   // per depth, T x 2H
  Eigen::MatrixXd logits;              // T x K, pre-softmax activations
};

// Runs the stack over a feature sequence. Throws ShapeError on a feature
// dimension mismatch and EmptyInput for T = 0.
PosteriorGrid Forward(const BlstmStack& stack, const FeatureSequence& x,
                      ForwardCache* cache = nullptr);

// Exact reverse-mode gradients of a scalar loss with gradient
// `dloss_dlogits` (T x K) w.r.t. the pre-softmax activations.
ParamGradients Backward(const BlstmStack& stack, const ForwardCache& cache,
                        const Eigen::MatrixXd& dloss_dlogits);

// Softmax over each row with max subtraction.
Eigen::MatrixXd RowSoftmax(const Eigen::MatrixXd& logits);

// Single-stage building blocks shared by Forward and the pipelined runner;
// both directions of one depth (returns the T x 2H concatenation), and the
// output layer plus softmax.
Eigen::MatrixXd RunDepth(const BlstmStack& stack, int depth,
                         const Eigen::MatrixXd& input);
PosteriorGrid RunOutputLayer(const BlstmStack& stack,
                             const Eigen::MatrixXd& top);

}  // namespace wordrec

#endif  // WORDREC_NETWORK_BLSTM_H_
