// wordrec/wfst/wfst.h

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

#ifndef WORDREC_WFST_WFST_H_
#define WORDREC_WFST_WFST_H_

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace wordrec {

// Label 0 is epsilon on both tapes.
constexpr int kEpsilon = 0;

// Weights are negative log probabilities. kInfiniteWeight marks "no final
// weight" on a state; arc weights themselves must stay finite.
constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

// Tropical: min / +  (Viterbi path choice).  Log: -log(e^-a + e^-b) / +
// (reserved for posterior-style combination; no operation here sums over
// paths yet, but machines carry the tag so mixing is caught early).
enum class Semiring { kTropical, kLog };

struct Arc {
  int ilabel = kEpsilon;
  int olabel = kEpsilon;
  double weight = 0.0;
  int dst = -1;
};

// A weighted finite-state transducer with a single start state.
// Immutable once built by convention: every operation returns a new machine.
class Wfst {
 public:
  explicit Wfst(Semiring semiring = Semiring::kTropical)
      : semiring_(semiring) {}

  int AddState() {
    arcs_.emplace_back();
    final_.push_back(kInfiniteWeight);
    return static_cast<int>(arcs_.size()) - 1;
  }

  void SetStart(int state) {
    CheckState(state);
    start_ = state;
  }
  int Start() const { return start_; }

  void SetFinal(int state, double weight) {
    CheckState(state);
    final_[state] = weight;
  }
  bool IsFinal(int state) const { return final_[state] != kInfiniteWeight; }
  double FinalWeight(int state) const { return final_[state]; }

  void AddArc(int src, const Arc& arc);

  int NumStates() const { return static_cast<int>(arcs_.size()); }
  int NumArcs() const;
  const std::vector<Arc>& ArcsFrom(int state) const {
    CheckState(state);
    return arcs_[state];
  }

  Semiring semiring() const { return semiring_; }

  // True if no cycle is reachable from the start state.
  bool IsAcyclic() const;

 private:
  void CheckState(int state) const;

  Semiring semiring_;
  int start_ = -1;
  std::vector<std::vector<Arc>> arcs_;
  std::vector<double> final_;
};

// Composition A . B: accepts (x, z) iff A accepts (x, y) and B accepts (y, z)
// for some y, weights combined by semiring product. Epsilon output arcs in A
// and epsilon input arcs in B are matched through the standard three-state
// epsilon filter, so each pair of accepting paths contributes exactly one
// composed path. Throws SemiringError on mismatched semirings.
Wfst Compose(const Wfst& a, const Wfst& b);

enum class ProjectSide { kInput, kOutput };

// Copies the chosen side's label onto both tapes of every arc.
Wfst Project(const Wfst& a, ProjectSide side);

// Swaps input and output labels on every arc. Involution.
Wfst Invert(const Wfst& a);

// Removes states that are not on some accepting path; the weighted path set
// is unchanged. A machine with no accepting paths trims to a lone start state.
Wfst Connect(const Wfst& a);

// Multiplies every arc and final weight by `factor` (LM scale knob).
Wfst ScaleWeights(const Wfst& a, double factor);

struct ShortestPathResult {
  std::vector<int> ilabels;  // epsilon-free
  std::vector<int> olabels;  // epsilon-free
  double weight = 0.0;
};

// Minimum-weight accepting path under the tropical semiring. Ties are broken
// toward the lexicographically smallest epsilon-free output label sequence;
// the lexicographic guarantee holds for acyclic machines (cyclic machines get
// a plain distance-based search). Throws EmptyMachine when no accepting path
// exists and SemiringError for log-semiring machines.
ShortestPathResult ShortestPath(const Wfst& a);

struct EnumeratedPath {
  std::vector<int> ilabels;  // epsilon-free
  std::vector<int> olabels;  // epsilon-free
  double weight = 0.0;
};

// Exhaustively lists accepting paths of an acyclic machine (test oracles,
// verbalization expansion). Throws TooLarge past `max_paths` and
// CyclicMachine if a cycle is reachable.
std::vector<EnumeratedPath> EnumeratePaths(const Wfst& a,
                                           std::size_t max_paths = 100000);

// Text format, bit-exact round trip:
//   arc lines   "src<TAB>dst<TAB>ilabel<TAB>olabel<TAB>weight"
//   final lines "state<TAB>weight"
//   bare state id for a machine whose start state has no arcs and no final
// The first line's first field is the start state.
void WriteFstText(const Wfst& a, std::ostream& os);
Wfst ReadFstText(std::istream& is, Semiring semiring = Semiring::kTropical);
void WriteFstFile(const Wfst& a, const std::string& path);
Wfst ReadFstFile(const std::string& path,
                 Semiring semiring = Semiring::kTropical);

}  // namespace wordrec

#endif  // WORDREC_WFST_WFST_H_
