// wordrec/language/ngram.cc

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

#include "wordrec/language/ngram.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "wordrec/common/error.h"

namespace wordrec {

namespace {

constexpr double kDiscount = 0.5;
constexpr double kLn10 = 2.302585092994046;
// ARPA placeholder for grams that exist only as backoff histories.
constexpr double kArpaNoProb = -99.0;

std::vector<int> Truncate(const std::vector<int>& history, int max_len) {
  if (static_cast<int>(history.size()) <= max_len) return history;
  return {history.end() - max_len, history.end()};
}

}  // namespace

double NGramLm::LogProb(const std::vector<int>& history, int word) const {
  if (word < 1 || word > vocab_size_ + 3 || word == BosId()) {
    throw Error("InvalidLabel",
                "word id " + std::to_string(word) + " not predictable");
  }
  std::vector<int> h = Truncate(history, order_ - 1);
  double acc = 0.0;
  while (true) {
    std::vector<int> gram = h;
    gram.push_back(word);
    auto it = logprob_.find(gram);
    if (it != logprob_.end()) return acc + it->second;
    if (h.empty()) {
      // Unigram entries cover the full prediction alphabet by construction;
      // reaching this means the model was built inconsistently.
      throw Error("FormatError",
                  "missing unigram for id " + std::to_string(word));
    }
    auto bo = backoff_.find(h);
    if (bo != backoff_.end()) acc += bo->second;
    h.erase(h.begin());
  }
}

double NGramLm::SentenceLogProb(const std::vector<int>& words) const {
  std::vector<int> history(std::max(order_ - 1, 0), BosId());
  double total = 0.0;
  for (int w : words) {
    total += LogProb(history, w);
    history.push_back(w);
  }
  total += LogProb(history, EosId());
  return total;
}

double NGramLm::SumConditional(const std::vector<int>& history) const {
  double sum = 0.0;
  for (int w : PredictionAlphabet()) sum += std::exp(LogProb(history, w));
  return sum;
}

std::vector<int> NGramLm::PredictionAlphabet() const {
  std::vector<int> ids;
  ids.reserve(vocab_size_ + 2);
  for (int w = 1; w <= vocab_size_; ++w) ids.push_back(w);
  ids.push_back(EosId());
  ids.push_back(UnkId());
  return ids;
}

int MapTokenToLmId(const Vocabulary& vocab, const std::string& token) {
  int id = vocab.Find(token);
  return id >= 0 ? id : vocab.size() + 3;
}

NGramLm TrainNgram(const std::vector<std::vector<std::string>>& corpus,
                   int order, const Vocabulary& vocab) {
  if (order < 1) throw Error("ConfigError", "n-gram order must be >= 1");
  if (corpus.empty()) throw Error("EmptyCorpus", "no sentences to estimate on");

  NGramLm lm(order, vocab.size());
  const int bos = lm.BosId();

  std::map<std::vector<int>, std::int64_t> counts;
  for (const auto& sentence : corpus) {
    std::vector<int> padded(std::max(order - 1, 0), bos);
    for (const auto& token : sentence) {
      padded.push_back(MapTokenToLmId(vocab, token));
    }
    padded.push_back(lm.EosId());
    for (std::size_t i = 0; i < padded.size(); ++i) {
      if (padded[i] == bos) continue;  // <s> is never predicted
      for (int k = 1; k <= order; ++k) {
        if (static_cast<int>(i) - k + 1 < 0) break;
        counts[{padded.begin() + (i - k + 1), padded.begin() + (i + 1)}]++;
      }
    }
  }

  // History totals at each length.
  std::map<std::vector<int>, std::int64_t> hist_total;
  std::int64_t unigram_total = 0;
  std::int64_t unigram_types = 0;
  for (const auto& [gram, count] : counts) {
    if (gram.size() == 1) {
      unigram_total += count;
      ++unigram_types;
    } else {
      std::vector<int> hist(gram.begin(), gram.end() - 1);
      hist_total[hist] += count;
    }
  }

  // Unigrams: discounted relative frequency for seen symbols, the freed mass
  // split over the unseen ones (so <unk> and unseen words keep probability).
  const std::vector<int> alphabet = lm.PredictionAlphabet();
  const double leftover =
      kDiscount * static_cast<double>(unigram_types) / unigram_total;
  int unseen = 0;
  for (int w : alphabet) unseen += counts.count({w}) ? 0 : 1;
  for (int w : alphabet) {
    auto it = counts.find({w});
    double p;
    if (it != counts.end()) {
      p = (static_cast<double>(it->second) - kDiscount) / unigram_total;
      // With nothing unseen the freed mass has nowhere to go; fold it back.
      if (unseen == 0) p /= 1.0 - leftover;
    } else {
      p = leftover / unseen;
    }
    lm.mutable_logprob()[{w}] = std::log(p);
  }

  // Seen continuations per history.
  std::map<std::vector<int>, std::vector<std::pair<int, std::int64_t>>> conts;
  for (const auto& [gram, count] : counts) {
    if (gram.size() == 1) continue;
    std::vector<int> hist(gram.begin(), gram.end() - 1);
    conts[hist].emplace_back(gram.back(), count);
  }

  // Higher orders, then the backoff weight of each history against the
  // already-complete lower orders.
  for (int k = 2; k <= order; ++k) {
    for (const auto& [hist, words] : conts) {
      if (static_cast<int>(hist.size()) != k - 1) continue;
      const double total = static_cast<double>(hist_total[hist]);
      double explicit_mass = 0.0;
      double lower_mass = 0.0;
      std::vector<int> shorter(hist.begin() + 1, hist.end());
      for (const auto& [word, count] : words) {
        double p = (static_cast<double>(count) - kDiscount) / total;
        std::vector<int> gram = hist;
        gram.push_back(word);
        lm.mutable_logprob()[gram] = std::log(p);
        explicit_mass += p;
        lower_mass += std::exp(lm.LogProb(shorter, word));
      }
      double den = 1.0 - lower_mass;
      if (den < 1e-12) {
        // Every alphabet symbol was seen after this history: renormalize the
        // explicit row and drop the backoff weight.
        for (const auto& [word, count] : words) {
          (void)count;
          std::vector<int> gram = hist;
          gram.push_back(word);
          lm.mutable_logprob()[gram] -= std::log(explicit_mass);
        }
      } else {
        lm.mutable_backoff()[hist] = std::log((1.0 - explicit_mass) / den);
      }
    }
  }
  return lm;
}

namespace {

std::string LmSymbolName(const NGramLm& lm, const Vocabulary& vocab, int id) {
  if (id == lm.BosId()) return "<s>";
  if (id == lm.EosId()) return "</s>";
  if (id == lm.UnkId()) return "<unk>";
  return vocab.Word(id);
}

int LmSymbolId(const NGramLm& lm, const Vocabulary& vocab,
               const std::string& name) {
  if (name == "<s>") return lm.BosId();
  if (name == "</s>") return lm.EosId();
  if (name == "<unk>") return lm.UnkId();
  int id = vocab.Find(name);
  if (id < 0) {
    throw Error("FormatError", "ARPA word '" + name + "' not in vocabulary");
  }
  return id;
}

}  // namespace

void NGramLm::WriteArpa(const Vocabulary& vocab, const std::string& path) const {
  // Grams that exist only as backoff histories still need a line.
  std::map<std::vector<int>, std::pair<double, bool>> entries;  // ln p, has_p
  for (const auto& [gram, lp] : logprob_) entries[gram] = {lp, true};
  for (const auto& [hist, bo] : backoff_) {
    (void)bo;
    if (!entries.count(hist)) entries[hist] = {0.0, false};
  }

  std::vector<std::int64_t> per_order(order_, 0);
  for (const auto& [gram, e] : entries) {
    (void)e;
    per_order[gram.size() - 1]++;
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  os << "\\data\\\n";
  for (int k = 1; k <= order_; ++k) {
    os << "ngram " << k << "=" << per_order[k - 1] << "\n";
  }
  os.precision(12);
  for (int k = 1; k <= order_; ++k) {
    os << "\n\\" << k << "-grams:\n";
    for (const auto& [gram, e] : entries) {
      if (static_cast<int>(gram.size()) != k) continue;
      double log10p = e.second ? e.first / kLn10 : kArpaNoProb;
      os << log10p << '\t';
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (i) os << ' ';
        os << LmSymbolName(*this, vocab, gram[i]);
      }
      auto bo = backoff_.find(gram);
      if (bo != backoff_.end()) os << '\t' << bo->second / kLn10;
      os << '\n';
    }
  }
  os << "\n\\end\\\n";
  if (!os) throw Error("IoError", "write failed: " + path);
}

NGramLm NGramLm::ReadArpa(const Vocabulary& vocab, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::string line;
  while (std::getline(is, line) && line != "\\data\\") {
  }
  if (line != "\\data\\") throw Error("FormatError", "no \\data\\ header");

  int order = 0;
  while (std::getline(is, line)) {
    if (line.empty()) break;
    if (line.rfind("ngram ", 0) == 0) {
      order = std::max(order, std::stoi(line.substr(6, line.find('=') - 6)));
    }
  }
  if (order < 1) throw Error("FormatError", "no ngram counts in header");

  NGramLm lm(order, vocab.size());
  int current = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    if (line[0] == '\\') {
      current = std::stoi(line.substr(1, line.find('-') - 1));
      continue;
    }
    std::istringstream fields(line);
    double log10p;
    fields >> log10p;
    std::vector<int> gram;
    for (int i = 0; i < current; ++i) {
      std::string name;
      fields >> name;
      gram.push_back(LmSymbolId(lm, vocab, name));
    }
    double backoff;
    if (fields >> backoff) lm.mutable_backoff()[gram] = backoff * kLn10;
    if (log10p != kArpaNoProb) lm.mutable_logprob()[gram] = log10p * kLn10;
  }
  return lm;
}

Wfst LmToFst(const NGramLm& lm) {
  // One state per backoff history plus the unigram (empty-history) state.
  std::map<std::vector<int>, int> state_of;
  Wfst g(Semiring::kTropical);
  state_of[{}] = g.AddState();
  for (const auto& [hist, bo] : lm.backoff()) {
    (void)bo;
    state_of[hist] = g.AddState();
  }
  auto longest_suffix_state = [&](std::vector<int> h) {
    while (!h.empty() && !state_of.count(h)) h.erase(h.begin());
    return state_of.at(h);
  };

  std::vector<int> start_hist(std::max(lm.order() - 1, 0), lm.BosId());
  g.SetStart(longest_suffix_state(start_hist));

  for (const auto& [gram, lp] : lm.logprob()) {
    std::vector<int> hist(gram.begin(), gram.end() - 1);
    int word = gram.back();
    auto src = state_of.find(hist);
    if (src == state_of.end()) continue;  // unreachable history row
    if (word == lm.EosId()) {
      g.SetFinal(src->second, -lp);
    } else if (word != lm.UnkId() && word != lm.BosId()) {
      std::vector<int> next = gram;
      g.AddArc(src->second,
               {word, word, -lp, longest_suffix_state(std::move(next))});
    }
  }
  for (const auto& [hist, bo] : lm.backoff()) {
    std::vector<int> shorter(hist.begin() + 1, hist.end());
    g.AddArc(state_of.at(hist),
             {kEpsilon, kEpsilon, -bo, longest_suffix_state(shorter)});
  }
  return g;
}

NGramLm Interpolate(const NGramLm& a, const NGramLm& b, double weight_b) {
  if (weight_b < 0.0 || weight_b > 1.0) {
    throw Error("ConfigError", "interpolation weight must be in [0, 1]");
  }
  if (a.order() != b.order() || a.vocab_size() != b.vocab_size()) {
    throw Error("ConfigError", "interpolating incompatible models");
  }
  NGramLm out(a.order(), a.vocab_size());
  std::map<std::vector<int>, bool> histories;
  histories[{}] = true;
  auto collect = [&histories](const NGramLm& lm) {
    for (const auto& [gram, lp] : lm.logprob()) {
      (void)lp;
      std::vector<int> hist(gram.begin(), gram.end() - 1);
      histories[hist] = true;
    }
    for (const auto& [hist, bo] : lm.backoff()) {
      (void)bo;
      histories[hist] = true;
    }
  };
  collect(a);
  collect(b);

  for (const auto& [hist, unused] : histories) {
    (void)unused;
    for (int w : out.PredictionAlphabet()) {
      double p = (1.0 - weight_b) * std::exp(a.LogProb(hist, w)) +
                 weight_b * std::exp(b.LogProb(hist, w));
      std::vector<int> gram = hist;
      gram.push_back(w);
      out.mutable_logprob()[gram] = std::log(p);
    }
  }
  return out;
}

}  // namespace wordrec
