// wordrec/network/blstm.cc

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

#include "wordrec/network/blstm.h"

#include <cmath>

#include "wordrec/common/error.h"

namespace wordrec {

namespace {

inline Eigen::ArrayXd Sigmoid(const Eigen::ArrayXd& z) {
  return 1.0 / (1.0 + (-z).exp());
}

}  // namespace

BlstmStack::BlstmStack(int depths, int hidden, int input_dim, int num_outputs)
    : depths_(depths),
      hidden_(hidden),
      input_dim_(input_dim),
      num_outputs_(num_outputs) {
  if (depths < 1 || hidden < 1 || input_dim < 1 || num_outputs < 2) {
    throw Error("ConfigError", "invalid stack geometry");
  }
  for (int d = 0; d < depths_; ++d) {
    for (int dir = 0; dir < 2; ++dir) {
      tensors_.emplace_back(Eigen::MatrixXd::Zero(4 * hidden_,
                                                  LayerInputDim(d)));
      tensors_.emplace_back(Eigen::MatrixXd::Zero(4 * hidden_, hidden_));
      tensors_.emplace_back(Eigen::MatrixXd::Zero(4 * hidden_, 1));
    }
  }
  tensors_.emplace_back(Eigen::MatrixXd::Zero(num_outputs_, 2 * hidden_));
  tensors_.emplace_back(Eigen::MatrixXd::Zero(num_outputs_, 1));
}

std::int64_t BlstmStack::NumParams() const {
  std::int64_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

Eigen::VectorXd BlstmStack::FlattenParams() const {
  Eigen::VectorXd flat(NumParams());
  std::int64_t at = 0;
  for (const auto& t : tensors_) {
    flat.segment(at, t.size()) =
        Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
    at += t.size();
  }
  return flat;
}

void BlstmStack::UnflattenParams(const Eigen::VectorXd& flat) {
  if (flat.size() != NumParams()) {
    throw Error("ShapeError", "flat parameter size mismatch");
  }
  std::int64_t at = 0;
  for (auto& t : tensors_) {
    Eigen::Map<Eigen::VectorXd>(t.data(), t.size()) =
        flat.segment(at, t.size());
    at += t.size();
  }
}

bool BlstmStack::SameShape(const BlstmStack& other) const {
  return depths_ == other.depths_ && hidden_ == other.hidden_ &&
         input_dim_ == other.input_dim_ && num_outputs_ == other.num_outputs_;
}

void ParamGradients::SetZeroLike(const BlstmStack& stack) {
  tensors.resize(stack.NumTensors());
  for (int i = 0; i < stack.NumTensors(); ++i) {
    tensors[i] = Eigen::MatrixXd::Zero(stack.Tensor(i).rows(),
                                       stack.Tensor(i).cols());
  }
}

void ParamGradients::Accumulate(const ParamGradients& other) {
  if (tensors.empty()) {
    tensors = other.tensors;
    return;
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) tensors[i] += other.tensors[i];
}

void ParamGradients::Scale(double factor) {
  for (auto& t : tensors) t *= factor;
}

void ParamGradients::ClipElementwise(double limit) {
  for (auto& t : tensors) {
    t = t.cwiseMax(-limit).cwiseMin(limit);
  }
}

Eigen::MatrixXd RowSoftmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    Eigen::ArrayXd row = logits.row(t).array();
    row -= row.maxCoeff();
    Eigen::ArrayXd e = row.exp();
    out.row(t) = (e / e.sum()).matrix().transpose();
  }
  return out;
}

namespace {

// One direction of one layer. `input` is T x in; fills a T x H cache.
// The backward direction runs t = T-1..0 but stores its outputs at their
// original time indices.
void RunDirection(const BlstmStack& stack, int depth,
                  BlstmStack::Direction dir, const Eigen::MatrixXd& input,
                  ForwardCache::DirectionCache* cache) {
  const int t_count = static_cast<int>(input.rows());
  const int h = stack.hidden();
  const Eigen::MatrixXd& wx = stack.InputWeights(depth, dir);
  const Eigen::MatrixXd& wh = stack.RecurrentWeights(depth, dir);
  const Eigen::VectorXd bias = stack.Bias(depth, dir).col(0);

  cache->input_gate.resize(t_count, h);
  cache->forget_gate.resize(t_count, h);
  cache->cell_input.resize(t_count, h);
  cache->output_gate.resize(t_count, h);
  cache->cell_raw.resize(t_count, h);
  cache->cell.resize(t_count, h);
  cache->h.resize(t_count, h);

  // Input contribution for every frame in one product.
  Eigen::MatrixXd pre = wx * input.transpose();  // 4H x T

  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
  const int begin = dir == BlstmStack::kForward ? 0 : t_count - 1;
  const int step = dir == BlstmStack::kForward ? 1 : -1;
  for (int i = 0, t = begin; i < t_count; ++i, t += step) {
    Eigen::VectorXd z = pre.col(t) + wh * h_prev + bias;
    Eigen::ArrayXd gi = Sigmoid(z.segment(0, h).array());
    Eigen::ArrayXd gf = Sigmoid(z.segment(h, h).array());
    Eigen::ArrayXd gc = z.segment(2 * h, h).array().tanh();
    Eigen::ArrayXd go = Sigmoid(z.segment(3 * h, h).array());
    Eigen::ArrayXd c_raw = gf * c_prev.array() + gi * gc;
    Eigen::ArrayXd c = c_raw.max(-kCellClip).min(kCellClip);
    Eigen::ArrayXd ht = go * c.tanh();

    cache->input_gate.row(t) = gi.transpose();
    cache->forget_gate.row(t) = gf.transpose();
    cache->cell_input.row(t) = gc.transpose();
    cache->output_gate.row(t) = go.transpose();
    cache->cell_raw.row(t) = c_raw.transpose();
    cache->cell.row(t) = c.transpose();
    cache->h.row(t) = ht.transpose();
    h_prev = ht.matrix();
    c_prev = c.matrix();
  }
}

}  // namespace

Eigen::MatrixXd RunDepth(const BlstmStack& stack, int depth,
                         const Eigen::MatrixXd& input) {
  ForwardCache::DepthCache scratch;
  RunDirection(stack, depth, BlstmStack::kForward, input,
               &scratch.dir[BlstmStack::kForward]);
  RunDirection(stack, depth, BlstmStack::kBackward, input,
               &scratch.dir[BlstmStack::kBackward]);
  Eigen::MatrixXd hcat(input.rows(), 2 * stack.hidden());
  hcat.leftCols(stack.hidden()) = scratch.dir[BlstmStack::kForward].h;
  hcat.rightCols(stack.hidden()) = scratch.dir[BlstmStack::kBackward].h;
  return hcat;
}

PosteriorGrid RunOutputLayer(const BlstmStack& stack,
                             const Eigen::MatrixXd& top) {
  Eigen::MatrixXd logits = top * stack.OutputWeights().transpose();
  logits.rowwise() += stack.OutputBias().col(0).transpose();
  PosteriorGrid grid;
  grid.values = RowSoftmax(logits);
  return grid;
}

PosteriorGrid Forward(const BlstmStack& stack, const FeatureSequence& x,
                      ForwardCache* cache) {
  const int t_count = x.num_frames();
  if (t_count == 0) throw Error("EmptyInput", "empty feature sequence");
  if (x.dim() != stack.input_dim()) {
    throw Error("ShapeError",
                "feature dim " + std::to_string(x.dim()) + " != stack input " +
                    std::to_string(stack.input_dim()));
  }

  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;
  fc.input = x.frames;
  fc.depths.assign(stack.depths(), {});
  fc.hcat.assign(stack.depths(), {});

  const Eigen::MatrixXd* layer_in = &fc.input;
  for (int d = 0; d < stack.depths(); ++d) {
    RunDirection(stack, d, BlstmStack::kForward, *layer_in,
                 &fc.depths[d].dir[BlstmStack::kForward]);
    RunDirection(stack, d, BlstmStack::kBackward, *layer_in,
                 &fc.depths[d].dir[BlstmStack::kBackward]);
    fc.hcat[d].resize(t_count, 2 * stack.hidden());
    fc.hcat[d].leftCols(stack.hidden()) =
        fc.depths[d].dir[BlstmStack::kForward].h;
    fc.hcat[d].rightCols(stack.hidden()) =
        fc.depths[d].dir[BlstmStack::kBackward].h;
    layer_in = &fc.hcat[d];
  }

  fc.logits = (*layer_in) * stack.OutputWeights().transpose();
  fc.logits.rowwise() += stack.OutputBias().col(0).transpose();

  PosteriorGrid grid;
  grid.values = RowSoftmax(fc.logits);
  return grid;
}

namespace {

// Reverse-mode pass for one direction; accumulates parameter gradients and
// the gradient w.r.t. the layer input.
void BackwardDirection(const BlstmStack& stack, int depth,
                       BlstmStack::Direction dir,
                       const Eigen::MatrixXd& layer_input,
                       const ForwardCache::DirectionCache& cache,
                       const Eigen::MatrixXd& dh_out,  // T x H
                       ParamGradients* grads, Eigen::MatrixXd* dinput) {
  const int t_count = static_cast<int>(layer_input.rows());
  const int h = stack.hidden();
  const Eigen::MatrixXd& wx = stack.InputWeights(depth, dir);
  const Eigen::MatrixXd& wh = stack.RecurrentWeights(depth, dir);
  const int wx_i = (depth * 2 + dir) * 3;

  Eigen::MatrixXd dz_all(t_count, 4 * h);  // gate pre-activation grads
  Eigen::ArrayXd dh_rec = Eigen::ArrayXd::Zero(h);
  Eigen::ArrayXd dc = Eigen::ArrayXd::Zero(h);
  const int begin = dir == BlstmStack::kForward ? t_count - 1 : 0;
  const int step = dir == BlstmStack::kForward ? -1 : 1;
  for (int i = 0, t = begin; i < t_count; ++i, t += step) {
    Eigen::ArrayXd dh = dh_out.row(t).transpose().array() + dh_rec;
    Eigen::ArrayXd gi = cache.input_gate.row(t).transpose().array();
    Eigen::ArrayXd gf = cache.forget_gate.row(t).transpose().array();
    Eigen::ArrayXd gc = cache.cell_input.row(t).transpose().array();
    Eigen::ArrayXd go = cache.output_gate.row(t).transpose().array();
    Eigen::ArrayXd c = cache.cell.row(t).transpose().array();
    Eigen::ArrayXd c_raw = cache.cell_raw.row(t).transpose().array();
    // Previous frame in direction order; this loop runs in reverse, so the
    // direction's t-1 sits at t + step.
    Eigen::ArrayXd c_prev(h);
    if (i == t_count - 1) {
      c_prev.setZero();
    } else {
      c_prev = cache.cell.row(t + step).transpose().array();
    }

    Eigen::ArrayXd tanh_c = c.tanh();
    Eigen::ArrayXd dgo = dh * tanh_c;
    dc += dh * go * (1.0 - tanh_c.square());
    // Straight-through with zeroing outside the clip interval.
    dc *= ((c_raw.abs() < kCellClip).cast<double>());

    Eigen::ArrayXd dgi = dc * gc;
    Eigen::ArrayXd dgf = dc * c_prev;
    Eigen::ArrayXd dgc = dc * gi;

    Eigen::ArrayXd dz(4 * h);
    dz.segment(0, h) = dgi * gi * (1.0 - gi);
    dz.segment(h, h) = dgf * gf * (1.0 - gf);
    dz.segment(2 * h, h) = dgc * (1.0 - gc.square());
    dz.segment(3 * h, h) = dgo * go * (1.0 - go);
    dz_all.row(t) = dz.transpose();

    dh_rec = (wh.transpose() * dz.matrix()).array();
    dc *= gf;  // carried to the previous step of this direction
  }

  // Batch the parameter and input gradients over all frames.
  grads->tensors[wx_i] += dz_all.transpose() * layer_input;
  Eigen::MatrixXd h_prev(t_count, h);  // h_{t-1} in direction order
  h_prev.setZero();
  if (dir == BlstmStack::kForward) {
    if (t_count > 1) h_prev.bottomRows(t_count - 1) = cache.h.topRows(t_count - 1);
  } else {
    if (t_count > 1) h_prev.topRows(t_count - 1) = cache.h.bottomRows(t_count - 1);
  }
  grads->tensors[wx_i + 1] += dz_all.transpose() * h_prev;
  grads->tensors[wx_i + 2].col(0) += dz_all.colwise().sum().transpose();
  if (dinput) *dinput += dz_all * wx;
}

}  // namespace

ParamGradients Backward(const BlstmStack& stack, const ForwardCache& cache,
                        const Eigen::MatrixXd& dloss_dlogits) {
  if (cache.logits.rows() != dloss_dlogits.rows() ||
      cache.logits.cols() != dloss_dlogits.cols()) {
    throw Error("ShapeError", "gradient grid shape mismatch");
  }
  if (static_cast<int>(cache.depths.size()) != stack.depths()) {
    throw Error("ShapeError", "cache does not match stack");
  }
  const int t_count = static_cast<int>(cache.logits.rows());
  const int h = stack.hidden();

  ParamGradients grads;
  grads.SetZeroLike(stack);

  const Eigen::MatrixXd& top = cache.hcat[stack.depths() - 1];
  grads.tensors[6 * stack.depths()] += dloss_dlogits.transpose() * top;
  grads.tensors[6 * stack.depths() + 1].col(0) +=
      dloss_dlogits.colwise().sum().transpose();

  // Gradient flowing into each depth's concatenated outputs.
  Eigen::MatrixXd dhcat = dloss_dlogits * stack.OutputWeights();  // T x 2H
  for (int d = stack.depths() - 1; d >= 0; --d) {
    const Eigen::MatrixXd& layer_input = d == 0 ? cache.input : cache.hcat[d - 1];
    Eigen::MatrixXd dinput =
        Eigen::MatrixXd::Zero(t_count, stack.LayerInputDim(d));
    BackwardDirection(stack, d, BlstmStack::kForward, layer_input,
                      cache.depths[d].dir[BlstmStack::kForward],
                      dhcat.leftCols(h), &grads, &dinput);
    BackwardDirection(stack, d, BlstmStack::kBackward, layer_input,
                      cache.depths[d].dir[BlstmStack::kBackward],
                      dhcat.rightCols(h), &grads, &dinput);
    if (d > 0) dhcat = std::move(dinput);
  }
  return grads;
}

}  // namespace wordrec
