// wordrec/ctc/ctc.cc

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

#include "wordrec/ctc/ctc.h"

#include <algorithm>
#include <cmath>

#include "wordrec/common/error.h"
#include "wordrec/common/log-math.h"

namespace wordrec {

CtcLattice::CtcLattice(const LabelSequence& labels) : labels_(labels) {
  for (int id : labels_) {
    if (id == kBlankId) {
      throw Error("InvalidLabel", "blank id in a label sequence");
    }
    if (id < 0) throw Error("InvalidLabel", "negative label id");
  }
}

int CtcLattice::MinFrames() const {
  int frames = static_cast<int>(labels_.size());
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (labels_[i] == labels_[i - 1]) ++frames;  // forced blank between
  }
  return frames;
}

LabelSequence MakeLabelSequence(const std::vector<int>& ids) { return ids; }

CtcLattice BuildCtcLattice(const LabelSequence& labels) {
  return CtcLattice(labels);
}

namespace {

// Log posterior of the state's label at frame t.
inline double EmitLogProb(const Eigen::MatrixXd& log_y, const CtcLattice& lat,
                          int t, int s) {
  return log_y(t, lat.StateLabel(s));
}

void CheckGridAgainstLattice(const PosteriorGrid& grid,
                             const CtcLattice& lattice) {
  if (grid.num_frames() < 1) throw Error("EmptyInput", "empty posterior grid");
  for (int label : lattice.labels()) {
    if (label >= grid.num_labels()) {
      throw Error("InvalidLabel", "label id " + std::to_string(label) +
                                      " outside the posterior grid");
    }
  }
  if (grid.num_frames() < lattice.MinFrames()) {
    throw Error("NoAlignment",
                "sequence needs " + std::to_string(lattice.MinFrames()) +
                    " frames, grid has " + std::to_string(grid.num_frames()));
  }
}

}  // namespace

CtcResult CtcLossGrad(const PosteriorGrid& grid, const CtcLattice& lattice) {
  CheckGridAgainstLattice(grid, lattice);
  const int t_count = grid.num_frames();
  const int s_count = lattice.num_states();
  const Eigen::MatrixXd log_y = grid.values.array().log().matrix();

  // alpha(t, u): log summed probability of paths entering state u at t,
  // including the emission at t.
  Eigen::MatrixXd alpha =
      Eigen::MatrixXd::Constant(t_count, s_count, kLogZero);
  alpha(0, 0) = EmitLogProb(log_y, lattice, 0, 0);
  if (s_count > 1) alpha(0, 1) = EmitLogProb(log_y, lattice, 0, 1);
  for (int t = 1; t < t_count; ++t) {
    for (int s = 0; s < s_count; ++s) {
      double sum = alpha(t - 1, s);
      if (s >= 1) sum = LogSumExp(sum, alpha(t - 1, s - 1));
      if (s >= 2 && lattice.HasSkip(s - 2)) {
        sum = LogSumExp(sum, alpha(t - 1, s - 2));
      }
      if (sum != kLogZero) {
        alpha(t, s) = sum + EmitLogProb(log_y, lattice, t, s);
      }
    }
  }

  // beta(t, u): log summed probability of completing a path from state u
  // after frame t's emission (the emission at t is excluded).
  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(t_count, s_count, kLogZero);
  for (int s = 0; s < s_count; ++s) {
    if (lattice.IsFinal(s)) beta(t_count - 1, s) = 0.0;
  }
  for (int t = t_count - 2; t >= 0; --t) {
    for (int s = 0; s < s_count; ++s) {
      double sum = beta(t + 1, s) + EmitLogProb(log_y, lattice, t + 1, s);
      if (s + 1 < s_count) {
        sum = LogSumExp(sum,
                        beta(t + 1, s + 1) +
                            EmitLogProb(log_y, lattice, t + 1, s + 1));
      }
      if (lattice.HasSkip(s) && s + 2 < s_count) {
        sum = LogSumExp(sum,
                        beta(t + 1, s + 2) +
                            EmitLogProb(log_y, lattice, t + 1, s + 2));
      }
      beta(t, s) = sum;
    }
  }

  double log_p = kLogZero;
  for (int s = 0; s < s_count; ++s) {
    if (lattice.IsFinal(s)) log_p = LogSumExp(log_p, alpha(t_count - 1, s));
  }
  if (log_p == kLogZero) {
    throw Error("NoAlignment", "no valid alignment has nonzero probability");
  }

  CtcResult result;
  result.loss = -log_p;
  result.occupancy.resize(t_count, s_count);
  result.dloss_dlogits = grid.values;
  for (int t = 0; t < t_count; ++t) {
    for (int s = 0; s < s_count; ++s) {
      double g = alpha(t, s) + beta(t, s) - log_p;
      double gamma = g == kLogZero ? 0.0 : std::exp(g);
      result.occupancy(t, s) = gamma;
      result.dloss_dlogits(t, lattice.StateLabel(s)) -= gamma;
    }
  }
  return result;
}

LabelSequence CollapsePath(const std::vector<int>& path) {
  LabelSequence out;
  int prev = -1;
  for (int id : path) {
    if (id != prev && id != kBlankId) out.push_back(id);
    prev = id;
  }
  return out;
}

double BruteForceLoss(const PosteriorGrid& grid, const LabelSequence& labels) {
  if (grid.num_frames() < 1) throw Error("EmptyInput", "empty posterior grid");
  for (int id : labels) {
    if (id == kBlankId) throw Error("InvalidLabel", "blank id in labels");
  }
  const int t_count = grid.num_frames();
  const int k = grid.num_labels();
  double paths = std::pow(static_cast<double>(k), t_count);
  if (paths > 1e7) {
    throw Error("TooLarge", "brute force limited to (V+1)^T <= 1e7");
  }

  std::vector<int> path(t_count, 0);
  double total = 0.0;
  while (true) {
    if (CollapsePath(path) == labels) {
      double p = 1.0;
      for (int t = 0; t < t_count; ++t) p *= grid.values(t, path[t]);
      total += p;
    }
    int pos = t_count - 1;
    while (pos >= 0 && path[pos] == k - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }
  if (total <= 0.0) {
    throw Error("NoAlignment", "no path collapses to the target labels");
  }
  return -std::log(total);
}

LabelSequence BestPathDecode(const PosteriorGrid& grid) {
  std::vector<int> path(grid.num_frames());
  for (int t = 0; t < grid.num_frames(); ++t) {
    int best = 0;
    for (int l = 1; l < grid.num_labels(); ++l) {
      if (grid.values(t, l) > grid.values(t, best)) best = l;
    }
    path[t] = best;
  }
  return CollapsePath(path);
}

ForcedAlignment ForcedAlign(const PosteriorGrid& grid,
                            const CtcLattice& lattice) {
  CheckGridAgainstLattice(grid, lattice);
  const int t_count = grid.num_frames();
  const int s_count = lattice.num_states();
  const Eigen::MatrixXd log_y = grid.values.array().log().matrix();

  // Viterbi scores forward and (emission-exclusive) backward, so that states
  // on some maximum-probability path satisfy vf + vb == best.
  Eigen::MatrixXd vf = Eigen::MatrixXd::Constant(t_count, s_count, kLogZero);
  vf(0, 0) = EmitLogProb(log_y, lattice, 0, 0);
  if (s_count > 1) vf(0, 1) = EmitLogProb(log_y, lattice, 0, 1);
  for (int t = 1; t < t_count; ++t) {
    for (int s = 0; s < s_count; ++s) {
      double best = vf(t - 1, s);
      if (s >= 1) best = std::max(best, vf(t - 1, s - 1));
      if (s >= 2 && lattice.HasSkip(s - 2)) {
        best = std::max(best, vf(t - 1, s - 2));
      }
      if (best != kLogZero) vf(t, s) = best + EmitLogProb(log_y, lattice, t, s);
    }
  }
  Eigen::MatrixXd vb = Eigen::MatrixXd::Constant(t_count, s_count, kLogZero);
  for (int s = 0; s < s_count; ++s) {
    if (lattice.IsFinal(s)) vb(t_count - 1, s) = 0.0;
  }
  for (int t = t_count - 2; t >= 0; --t) {
    for (int s = 0; s < s_count; ++s) {
      double best = vb(t + 1, s) + EmitLogProb(log_y, lattice, t + 1, s);
      if (s + 1 < s_count) {
        best = std::max(best, vb(t + 1, s + 1) +
                                  EmitLogProb(log_y, lattice, t + 1, s + 1));
      }
      if (lattice.HasSkip(s) && s + 2 < s_count) {
        best = std::max(best, vb(t + 1, s + 2) +
                                  EmitLogProb(log_y, lattice, t + 1, s + 2));
      }
      vb(t, s) = best;
    }
  }

  double best_total = kLogZero;
  for (int s = 0; s < s_count; ++s) {
    if (lattice.IsFinal(s)) best_total = std::max(best_total, vf(t_count - 1, s));
  }
  if (best_total == kLogZero) {
    throw Error("NoAlignment", "no valid alignment has nonzero probability");
  }

  // Greedy reconstruction. Preferring the highest admissible state at each
  // frame advances through label states as early as the optimum allows,
  // which is exactly the earliest-emission tie-break.
  const double tol = 1e-12 * (1.0 + std::abs(best_total));
  auto on_best_path = [&](int t, int s) {
    return vf(t, s) != kLogZero &&
           std::abs(vf(t, s) + vb(t, s) - best_total) <= tol;
  };
  ForcedAlignment out;
  out.states.resize(t_count);
  out.frame_labels.resize(t_count);
  out.log_prob = best_total;
  int current = -1;
  for (int s = std::min(1, s_count - 1); s >= 0; --s) {
    if (on_best_path(0, s)) {
      current = s;
      break;
    }
  }
  out.states[0] = current;
  for (int t = 1; t < t_count; ++t) {
    int next = -1;
    for (int delta = 2; delta >= 0; --delta) {
      int s = current + delta;
      if (s >= s_count) continue;
      if (delta == 2 && !lattice.HasSkip(current)) continue;
      if (!on_best_path(t, s)) continue;
      // The step must continue an optimal prefix, not merely land on an
      // optimal state.
      if (std::abs(vf(t - 1, current) + EmitLogProb(log_y, lattice, t, s) -
                   vf(t, s)) > tol) {
        continue;
      }
      next = s;
      break;
    }
    if (next < 0) throw Error("NoAlignment", "tie-break reconstruction failed");
    current = next;
    out.states[t] = current;
  }
  for (int t = 0; t < t_count; ++t) {
    out.frame_labels[t] = lattice.StateLabel(out.states[t]);
  }
  return out;
}

FeatureSequence OccupancyAsFeatures(const CtcResult& result,
                                    double frame_shift) {
  FeatureSequence fs;
  fs.frames = result.occupancy;
  fs.frame_shift = frame_shift;
  return fs;
}

}  // namespace wordrec
