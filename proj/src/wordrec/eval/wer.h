// wordrec/eval/wer.h

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

#ifndef WORDREC_EVAL_WER_H_
#define WORDREC_EVAL_WER_H_

#include <map>
#include <string>
#include <vector>

#include "wordrec/language/vocab.h"
#include "wordrec/wfst/wfst.h"

namespace wordrec {

// One aligned pair in a trace; empty string marks the missing side.
struct AlignedPair {
  std::string ref;
  std::string hyp;
  char op = 'C';  // C match, S substitution, I insertion, D deletion
};

struct UtteranceScore {
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  int ref_length = 0;
  std::vector<AlignedPair> alignment;
};

struct WerReport {
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  int ref_length = 0;
  std::map<std::string, UtteranceScore> utterances;

  int NumErrors() const { return substitutions + insertions + deletions; }
  double Wer() const {
    return ref_length == 0 ? 0.0
                           : static_cast<double>(NumErrors()) / ref_length;
  }
};

// Scoring normalization: lowercase, strip trailing sentence punctuation.
std::string NormalizeToken(const std::string& token);

// Minimum-edit-distance scoring with unit costs; equal-cost alignments
// prefer substitutions over insertion+deletion pairs. Hypotheses must be
// keyed by utterance ids that exist in refs (MissingRef otherwise);
// references without a hypothesis score as full deletions.
WerReport Wer(const std::map<std::string, std::vector<std::string>>& refs,
              const std::map<std::string, std::vector<std::string>>& hyps);

// Spoken alternative-reference sets: for each written reference sentence,
// the output-projected paths of compose(T, V). Scoring picks the alternative
// with the smallest edit distance per utterance. Throws RuleError when a
// reference word has no verbalization coverage.
std::map<std::string, std::vector<std::vector<std::string>>> SpokenReferences(
    const std::map<std::string, std::vector<std::string>>& written_refs,
    const Wfst& verbalizer, const Vocabulary& written,
    const Vocabulary& spoken);

// Scores hypotheses against alternative-reference sets (min edit distance
// alternative per utterance; its length is the denominator contribution).
WerReport WerAgainstAlternatives(
    const std::map<std::string, std::vector<std::vector<std::string>>>& refs,
    const std::map<std::string, std::vector<std::string>>& hyps);

// Spoken-domain scoring LM: project(compose(G, V), output): spoken strings
// carrying their written originals' LM scores. Throws SemiringError on
// mismatched semirings.
Wfst SpokenLm(const Wfst& lm, const Wfst& verbalizer);

// JSONL {id, words:[...]} per line.
std::map<std::string, std::vector<std::string>> ReadHypsJsonl(
    const std::string& path);
void WriteReportJson(const WerReport& report, const std::string& path);
void WriteAlignmentText(const WerReport& report, const std::string& path);

}  // namespace wordrec

#endif  // WORDREC_EVAL_WER_H_
