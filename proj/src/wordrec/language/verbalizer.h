// wordrec/language/verbalizer.h

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

#ifndef WORDREC_LANGUAGE_VERBALIZER_H_
#define WORDREC_LANGUAGE_VERBALIZER_H_

#include <string>
#include <vector>

#include "wordrec/language/vocab.h"
#include "wordrec/wfst/wfst.h"

namespace wordrec {

// One written token and its spoken expansions ("104" -> "one hundred four",
// "one oh four").
struct VerbalizerRule {
  std::string written;
  std::vector<std::vector<std::string>> expansions;
};

// Rule file: lines "written<TAB>spoken words..."; repeating a written token
// adds alternative expansions.
std::vector<VerbalizerRule> LoadVerbalizerRules(const std::string& path);
void SaveVerbalizerRules(const std::vector<VerbalizerRule>& rules,
                         const std::string& path);

// Builds V: written -> spoken. Input labels are written vocab ids, output
// labels spoken vocab ids. Every rule expansion becomes one path (epsilon
// input on continuation arcs); written words without a rule map to the
// same-spelled spoken word. Throws RuleError when an expansion word (or a
// non-rule word) is missing from the spoken vocabulary.
Wfst BuildVerbalizer(const std::vector<VerbalizerRule>& rules,
                     const Vocabulary& written, const Vocabulary& spoken);

// Linear acceptor for a word-id sentence (weights 0, tropical).
Wfst SentenceAcceptor(const std::vector<int>& word_ids);

// All spoken expansions of a written sentence: the output-projected paths of
// compose(sentence, V), deduplicated. Throws RuleError when the sentence has
// no verbalization at all.
std::vector<std::vector<int>> VerbalizationsOf(const std::vector<int>& written_ids,
                                               const Wfst& verbalizer);

}  // namespace wordrec

#endif  // WORDREC_LANGUAGE_VERBALIZER_H_
