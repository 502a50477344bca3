// wordrec/lattice/sausage.h

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

#ifndef WORDREC_LATTICE_SAUSAGE_H_
#define WORDREC_LATTICE_SAUSAGE_H_

#include <vector>

#include "wordrec/ctc/ctc.h"
#include "wordrec/network/blstm.h"
#include "wordrec/wfst/wfst.h"

namespace wordrec {

// Frame-level FST alphabet: a word keeps its vocabulary id; the blank takes
// id V+1 because label 0 means epsilon inside machines.
inline int BlankFrameSymbol(int vocab_size) { return vocab_size + 1; }

// Per-frame enumeration of the top-k posterior alternatives: T+1 chained
// states; frame t contributes one arc per word among the k most probable
// entries (weight -ln posterior) plus a blank arc, so at most k+1 arcs.
// `vocab_size` fixes the blank symbol id. k < 1 is a ConfigError.
Wfst BuildSausage(const PosteriorGrid& grid, int k, int vocab_size);

// Collapse transducer R over the frame alphabet: runs of the same word
// collapse to one output word, blanks to epsilon. One hub state plus one
// state per word, all final.
Wfst BuildCollapseFst(int vocab_size);

struct RescoreResult {
  std::vector<int> words;      // output-vocabulary word ids
  double acoustic_cost = 0.0;  // sum of -ln posterior along the chosen path
  double lm_cost = 0.0;        // unscaled LM contribution
  bool used_fallback = false;  // composition was empty; greedy decode emitted
};

// Spoken-vocabulary pipeline: shortest_path(lat . R . invert(V) . lm_scale*G)
// with output labels in the written vocabulary. An empty composition falls
// back to the greedy decode (spoken ids) with `used_fallback` set.
RescoreResult RescoreSpoken(const PosteriorGrid& grid, const Wfst& sausage,
                            const Wfst& collapse, const Wfst& verbalizer,
                            const Wfst& lm, double lm_scale);

// Written-vocabulary pipeline: shortest_path(lat . R . lm_scale*G).
RescoreResult RescoreWritten(const PosteriorGrid& grid, const Wfst& sausage,
                             const Wfst& collapse, const Wfst& lm,
                             double lm_scale);

}  // namespace wordrec

#endif  // WORDREC_LATTICE_SAUSAGE_H_
