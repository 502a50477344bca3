// wordrec/language/vocab.cc

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

#include "wordrec/language/vocab.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "wordrec/common/error.h"
#include "wordrec/network/checkpoint.h"

namespace wordrec {

int Vocabulary::Find(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? -1 : it->second;
}

const std::string& Vocabulary::Word(int id) const {
  if (id < 0 || id >= static_cast<int>(words_.size())) {
    throw Error("InvalidLabel", "word id " + std::to_string(id) +
                                    " outside vocabulary");
  }
  return words_[id];
}

int Vocabulary::AddWord(const std::string& word, std::int64_t count) {
  if (word.empty()) throw Error("ConfigError", "empty vocabulary word");
  if (ids_.count(word)) {
    throw Error("ConfigError", "duplicate vocabulary word '" + word + "'");
  }
  int id = static_cast<int>(words_.size());
  words_.push_back(word);
  counts_.push_back(count);
  ids_[word] = id;
  return id;
}

void Vocabulary::Save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  for (std::size_t id = 1; id < words_.size(); ++id) {
    os << words_[id] << '\t' << counts_[id] << '\n';
  }
}

Vocabulary Vocabulary::Load(const std::string& path, VocabDomain domain) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  Vocabulary vocab(domain);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("FormatError", "expected 'word<TAB>count': " + line);
    }
    vocab.AddWord(line.substr(0, tab), std::stoll(line.substr(tab + 1)));
  }
  return vocab;
}

SymbolTable Vocabulary::ToSymbolTable() const {
  SymbolTable table;
  for (std::size_t id = 1; id < words_.size(); ++id) {
    table.AddSymbol(words_[id], static_cast<int>(id));
  }
  return table;
}

std::string Vocabulary::Checksum() const {
  std::vector<std::string> lines(words_.begin() + 1, words_.end());
  return ChecksumLines(lines);
}

Vocabulary BuildVocab(const std::vector<std::vector<std::string>>& corpus,
                      std::int64_t min_count, VocabDomain domain) {
  if (min_count < 1) throw Error("ConfigError", "min_count must be >= 1");
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence) {
      ++counts[token];
      ++total;
    }
  }
  if (total == 0) throw Error("EmptyCorpus", "no tokens in corpus");

  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [word, count] : counts) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab(domain);
  for (const auto& [word, count] : kept) vocab.AddWord(word, count);
  return vocab;
}

double OovRate(const Vocabulary& vocab,
               const std::vector<std::vector<std::string>>& test) {
  std::int64_t total = 0;
  std::int64_t misses = 0;
  for (const auto& sentence : test) {
    for (const auto& token : sentence) {
      ++total;
      if (!vocab.Contains(token)) ++misses;
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(misses) / static_cast<double>(total);
}

std::vector<std::vector<std::string>> ReadTokenizedLines(
    const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream tokens(line);
    std::vector<std::string> sentence;
    std::string token;
    while (tokens >> token) sentence.push_back(token);
    if (!sentence.empty()) lines.push_back(std::move(sentence));
  }
  return lines;
}

}  // namespace wordrec
