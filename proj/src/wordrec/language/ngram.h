// wordrec/language/ngram.h

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

#ifndef WORDREC_LANGUAGE_NGRAM_H_
#define WORDREC_LANGUAGE_NGRAM_H_

#include <map>
#include <string>
#include <vector>

#include "wordrec/language/vocab.h"
#include "wordrec/wfst/wfst.h"

namespace wordrec {

// Backoff n-gram model with absolute discounting (d = 0.5).
//
// Symbols are vocabulary word ids 1..V plus three specials: <s> = V+1,
// </s> = V+2, <unk> = V+3. The prediction alphabet is every word plus </s>
// and <unk> (never <s>), and conditional probabilities sum to 1 over it for
// every history, backoff mass included. Probabilities are stored as natural
// logs; the ARPA serialization uses log10 like everyone else's.
class NGramLm {
 public:
  NGramLm() = default;
  NGramLm(int order, int vocab_size) : order_(order), vocab_size_(vocab_size) {}

  int order() const { return order_; }
  int vocab_size() const { return vocab_size_; }
  int BosId() const { return vocab_size_ + 1; }
  int EosId() const { return vocab_size_ + 2; }
  int UnkId() const { return vocab_size_ + 3; }

  // Natural-log conditional probability with full backoff. `history` may be
  // any length; only its last order-1 symbols matter. `word` must be in the
  // prediction alphabet (a word id, </s>, or <unk>).
  double LogProb(const std::vector<int>& history, int word) const;

  // Natural-log probability of the sentence: every word given its history
  // (starting from <s>) plus the end-of-sentence event. OOV word ids must
  // already be mapped to UnkId().
  double SentenceLogProb(const std::vector<int>& words) const;

  // Sum of conditional probabilities over the whole prediction alphabet;
  // equals 1 up to rounding for every history (normalization invariant).
  double SumConditional(const std::vector<int>& history) const;

  // Explicit-entry access (estimation, FST conversion, interpolation).
  const std::map<std::vector<int>, double>& logprob() const { return logprob_; }
  const std::map<std::vector<int>, double>& backoff() const { return backoff_; }
  std::map<std::vector<int>, double>& mutable_logprob() { return logprob_; }
  std::map<std::vector<int>, double>& mutable_backoff() { return backoff_; }

  std::vector<int> PredictionAlphabet() const;

  void WriteArpa(const Vocabulary& vocab, const std::string& path) const;
  static NGramLm ReadArpa(const Vocabulary& vocab, const std::string& path);

 private:
  int order_ = 1;
  int vocab_size_ = 0;
  std::map<std::vector<int>, double> logprob_;  // (history + word) -> ln p*
  std::map<std::vector<int>, double> backoff_;  // history -> ln alpha
};

// Maps a token to its vocabulary id or UnkId.
int MapTokenToLmId(const Vocabulary& vocab, const std::string& token);

// Estimates the model from whitespace-tokenized sentences. OOV tokens map to
// <unk>. Throws ConfigError for order < 1 and EmptyCorpus for an empty
// corpus.
NGramLm TrainNgram(const std::vector<std::vector<std::string>>& corpus,
                   int order, const Vocabulary& vocab);

// Converts the model to a tropical-weight acceptor over word ids: one state
// per history, word arcs weighted -ln p*, epsilon backoff arcs weighted
// -ln alpha, final weights from the end-of-sentence probabilities. <unk>
// gets no arcs (the recognizer cannot emit it).
Wfst LmToFst(const NGramLm& lm);

// Linear interpolation (1-w)*a + w*b as an explicit-table model: every
// history either model knows gets a full materialized row, so lookups score
// the exact interpolation. Both models must share order and vocabulary size.
NGramLm Interpolate(const NGramLm& a, const NGramLm& b, double weight_b);

}  // namespace wordrec

#endif  // WORDREC_LANGUAGE_NGRAM_H_
