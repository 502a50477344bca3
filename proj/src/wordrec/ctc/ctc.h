// wordrec/ctc/ctc.h

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

#ifndef WORDREC_CTC_CTC_H_
#define WORDREC_CTC_CTC_H_

#include <Eigen/Core>
#include <vector>

#include "wordrec/network/blstm.h"

namespace wordrec {

// Output unit 0 is the blank label everywhere in the toolkit.
constexpr int kBlankId = 0;

// Word ids (>= 1), no blanks.
using LabelSequence = std::vector<int>;

// The alignment lattice for a label sequence l of length U: 2U+1 states
// alternating blank (even) / label (odd). Every state has a self loop and an
// advance arc to s+1; a skip arc s -> s+2 exists only between distinct
// consecutive labels (a repeated label forces a visit to the blank between).
// Paths start in state 0 or 1 and accept in state 2U-1 or 2U (state 0 for
// U = 0).
class CtcLattice {
 public:
  // Throws InvalidLabel if the sequence contains the blank id.
  explicit CtcLattice(const LabelSequence& labels);

  int num_states() const { return 2 * static_cast<int>(labels_.size()) + 1; }
  int num_labels() const { return static_cast<int>(labels_.size()); }
  const LabelSequence& labels() const { return labels_; }

  bool IsLabelState(int s) const { return s % 2 == 1; }
  // Blank id for even states, the label for odd states.
  int StateLabel(int s) const {
    return IsLabelState(s) ? labels_[(s - 1) / 2] : kBlankId;
  }
  bool IsInitial(int s) const { return s == 0 || (s == 1 && num_states() > 1); }
  bool IsFinal(int s) const {
    return s == num_states() - 1 || s == num_states() - 2;
  }
  // Skip arc from label state s to label state s+2.
  bool HasSkip(int s) const {
    return IsLabelState(s) && s + 2 < num_states() &&
           StateLabel(s) != StateLabel(s + 2);
  }
  // Fewest frames any valid path needs: U plus one forced blank per
  // repeated adjacent label pair.
  int MinFrames() const;

 private:
  LabelSequence labels_;
};

LabelSequence MakeLabelSequence(const std::vector<int>& ids);
CtcLattice BuildCtcLattice(const LabelSequence& labels);

struct CtcResult {
  double loss = 0.0;                // -ln p(z^l | x)
  Eigen::MatrixXd dloss_dlogits;    // T x (V+1), gradient w.r.t. pre-softmax
  Eigen::MatrixXd occupancy;        // T x (2U+1) state posteriors gamma(t,u)
};

// Forward-backward over the lattice in log space.
//
// beta(t, u) excludes the emission at time t, so sum_u alpha(t,u)*beta(t,u)
// equals p(z^l|x) at every frame and the gradient is
//   dL/da[t][l] = y[t][l] - (1/p) * sum_{u: label(u)=l} alpha(t,u)*beta(t,u).
// Throws NoAlignment when no valid alignment fits in T frames.
CtcResult CtcLossGrad(const PosteriorGrid& grid, const CtcLattice& lattice);

// Definitional oracle: enumerates every length-T labeling, collapses it
// (merge repeats, then delete blanks), and sums the probability of those
// matching `labels`. Throws TooLarge when (V+1)^T > 10^7 and NoAlignment
// when no path collapses to the target.
double BruteForceLoss(const PosteriorGrid& grid, const LabelSequence& labels);

// Merge adjacent repeats, then remove blanks.
LabelSequence CollapsePath(const std::vector<int>& path);

// Per-frame argmax (smallest id wins ties), then collapse.
LabelSequence BestPathDecode(const PosteriorGrid& grid);

struct ForcedAlignment {
  std::vector<int> states;      // lattice state per frame
  std::vector<int> frame_labels;  // StateLabel of each state (blank = 0)
  double log_prob = 0.0;        // ln of the best path probability
};

// Maximum-probability lattice path for the grid; ties resolve toward the
// earliest possible label emissions. Throws NoAlignment when T < MinFrames.
ForcedAlignment ForcedAlign(const PosteriorGrid& grid,
                            const CtcLattice& lattice);

// Debug export of occupancies in the feature container format.
FeatureSequence OccupancyAsFeatures(const CtcResult& result,
                                    double frame_shift);

}  // namespace wordrec

#endif  // WORDREC_CTC_CTC_H_
