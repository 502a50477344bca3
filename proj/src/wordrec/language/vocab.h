// wordrec/language/vocab.h

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

#ifndef WORDREC_LANGUAGE_VOCAB_H_
#define WORDREC_LANGUAGE_VOCAB_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordrec/wfst/symbol-table.h"

namespace wordrec {

enum class VocabDomain { kWritten, kSpoken };

// Recognition vocabulary. Id 0 is reserved for the blank output unit and
// never maps to a corpus word; word ids are dense in [1, V].
class Vocabulary {
 public:
  explicit Vocabulary(VocabDomain domain = VocabDomain::kWritten)
      : domain_(domain) {}

  // Id of `word`, or -1 when out of vocabulary.
  int Find(const std::string& word) const;
  const std::string& Word(int id) const;  // throws on bad id
  std::int64_t Count(int id) const { return counts_[id]; }
  bool Contains(const std::string& word) const { return Find(word) >= 0; }

  int size() const { return static_cast<int>(words_.size()) - 1; }  // V
  VocabDomain domain() const { return domain_; }

  int AddWord(const std::string& word, std::int64_t count);

  // Text format "word<TAB>count"; file order defines the ids (1-based).
  void Save(const std::string& path) const;
  static Vocabulary Load(const std::string& path,
                         VocabDomain domain = VocabDomain::kWritten);

  // Word-level FST symbols: <eps>=0 plus every word at its vocab id. Blank
  // never appears at the word level, so id 0 stays epsilon.
  SymbolTable ToSymbolTable() const;

  // FNV-1a over the word list, for checkpoint/vocab pairing.
  std::string Checksum() const;

 private:
  VocabDomain domain_;
  std::vector<std::string> words_ = {"<blank>"};
  std::vector<std::int64_t> counts_ = {0};
  std::unordered_map<std::string, int> ids_;
};

// Builds a vocabulary from whitespace-tokenized sentences, keeping words
// with count >= min_count (the corpus convention "seen more than N times"
// is min_count = N+1). Ids are assigned by descending count, then
// lexicographically. Throws EmptyCorpus when no tokens arrive and
// ConfigError for min_count < 1.
Vocabulary BuildVocab(const std::vector<std::vector<std::string>>& corpus,
                      std::int64_t min_count, VocabDomain domain);

// Fraction of test tokens absent from the vocabulary.
double OovRate(const Vocabulary& vocab,
               const std::vector<std::vector<std::string>>& test);

// Whitespace-tokenizes a text file, one sentence per line.
std::vector<std::vector<std::string>> ReadTokenizedLines(
    const std::string& path);

}  // namespace wordrec

#endif  // WORDREC_LANGUAGE_VOCAB_H_
