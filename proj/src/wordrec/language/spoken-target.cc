// wordrec/language/spoken-target.cc

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

#include "wordrec/language/spoken-target.h"

#include "wordrec/common/error.h"
#include "wordrec/language/verbalizer.h"

namespace wordrec {

LabelSequence SelectSpokenTarget(const std::vector<int>& written_ids,
                                 const Wfst& verbalizer,
                                 const PosteriorGrid& grid) {
  std::vector<std::vector<int>> options = VerbalizationsOf(written_ids,
                                                           verbalizer);
  const LabelSequence* best = nullptr;
  double best_score = 0.0;
  for (const auto& option : options) {
    CtcLattice lattice(option);
    if (grid.num_frames() < lattice.MinFrames()) continue;
    double score = ForcedAlign(grid, lattice).log_prob;
    if (best == nullptr || score > best_score ||
        (score == best_score && (option.size() < best->size() ||
                                 (option.size() == best->size() &&
                                  option < *best)))) {
      best = &option;
      best_score = score;
    }
  }
  if (best == nullptr) {
    throw Error("NoAlignment", "no verbalization fits in the frame budget");
  }
  return *best;
}

}  // namespace wordrec
