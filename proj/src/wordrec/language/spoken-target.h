// wordrec/language/spoken-target.h

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

#ifndef WORDREC_LANGUAGE_SPOKEN_TARGET_H_
#define WORDREC_LANGUAGE_SPOKEN_TARGET_H_

#include <vector>

#include "wordrec/ctc/ctc.h"
#include "wordrec/wfst/wfst.h"

namespace wordrec {

// Picks the spoken training target for a written sentence: among all spoken
// expansions through the verbalizer, the one whose forced alignment against
// the posterior grid has the highest path probability. Ties prefer fewer
// words, then the lexicographically smaller sequence. Throws RuleError when
// the sentence has no verbalization and NoAlignment when none fits in the
// grid's frames.
LabelSequence SelectSpokenTarget(const std::vector<int>& written_ids,
                                 const Wfst& verbalizer,
                                 const PosteriorGrid& grid);

}  // namespace wordrec

#endif  // WORDREC_LANGUAGE_SPOKEN_TARGET_H_
