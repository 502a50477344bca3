// wordrec/datafilter/islands.cc

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

#include "wordrec/datafilter/islands.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wordrec/common/error.h"

namespace wordrec {

namespace {

std::string Lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Alignment ops against the hypothesis axis.
enum class EditOp { kMatch, kSub, kDel, kIns };

// Unit-cost Levenshtein with a fixed backtrace preference
// (match/sub > delete > insert) so runs of matches stay maximal.
std::vector<std::pair<EditOp, int>> AlignWords(
    const std::vector<std::string>& caption,
    const std::vector<std::string>& hypothesis) {
  const int n = static_cast<int>(caption.size());
  const int m = static_cast<int>(hypothesis.size());
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 0; i <= n; ++i) cost[i][0] = i;
  for (int j = 0; j <= m; ++j) cost[0][j] = j;
  std::vector<std::vector<bool>> match(n, std::vector<bool>(m, false));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      bool eq = Lowercase(caption[i - 1]) == Lowercase(hypothesis[j - 1]);
      match[i - 1][j - 1] = eq;
      int diag = cost[i - 1][j - 1] + (eq ? 0 : 1);
      int del = cost[i - 1][j] + 1;  // caption word unmatched
      int ins = cost[i][j - 1] + 1;  // extra hypothesis word
      cost[i][j] = std::min({diag, del, ins});
    }
  }
  std::vector<std::pair<EditOp, int>> ops;  // (op, hypothesis index or -1)
  int i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        cost[i][j] == cost[i - 1][j - 1] + (match[i - 1][j - 1] ? 0 : 1)) {
      ops.emplace_back(match[i - 1][j - 1] ? EditOp::kMatch : EditOp::kSub,
                       j - 1);
      --i;
      --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ops.emplace_back(EditOp::kDel, -1);
      --i;
    } else {
      ops.emplace_back(EditOp::kIns, j - 1);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

}  // namespace

std::vector<Island> FindIslands(const CaptionedUtterance& u, int min_island) {
  if (min_island < 1) throw Error("ConfigError", "min_island must be >= 1");
  std::vector<std::string> hyp_words;
  hyp_words.reserve(u.hypothesis.size());
  for (const auto& w : u.hypothesis) hyp_words.push_back(w.word);
  auto ops = AlignWords(u.caption, hyp_words);

  std::vector<Island> islands;
  int run_begin = -1;
  int run_len = 0;
  auto flush = [&](int run_end) {
    if (run_len >= min_island) {
      Island island;
      island.begin = run_begin;
      island.end = run_end;
      island.t0 = u.hypothesis[run_begin].t0;
      island.t1 = u.hypothesis[run_end - 1].t1;
      for (int k = run_begin; k < run_end; ++k) {
        island.words.push_back(u.hypothesis[k].word);
      }
      islands.push_back(std::move(island));
    }
    run_begin = -1;
    run_len = 0;
  };
  for (const auto& [op, hyp_index] : ops) {
    if (op == EditOp::kMatch) {
      if (run_len == 0) run_begin = hyp_index;
      ++run_len;
    } else if (run_len > 0) {
      flush(run_begin + run_len);
    }
  }
  if (run_len > 0) flush(run_begin + run_len);
  return islands;
}

NGramLm CaptionBiasedLm(const NGramLm& background,
                        const std::vector<std::string>& caption, double weight,
                        const Vocabulary& vocab) {
  if (weight < 0.0 || weight > 1.0) {
    throw Error("ConfigError", "caption bias weight must be in [0, 1]");
  }
  if (caption.empty() || weight == 0.0) return background;
  NGramLm caption_lm = TrainNgram({caption}, background.order(), vocab);
  return Interpolate(background, caption_lm, weight);
}

RetentionStats ComputeRetention(
    const std::vector<std::vector<Island>>& islands,
    const std::vector<CaptionedUtterance>& utterances) {
  RetentionStats stats;
  for (const auto& u : utterances) {
    if (!u.hypothesis.empty()) {
      stats.total_duration += u.hypothesis.back().t1 - u.hypothesis.front().t0;
    }
  }
  for (const auto& per_utt : islands) {
    for (const auto& island : per_utt) {
      stats.retained_duration += island.t1 - island.t0;
      ++stats.segment_count;
    }
  }
  stats.retained_fraction =
      stats.total_duration > 0 ? stats.retained_duration / stats.total_duration
                               : 0.0;
  return stats;
}

std::vector<CaptionedUtterance> ReadCaptionedJsonl(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::vector<CaptionedUtterance> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded()) throw Error("FormatError", "bad JSONL: " + line);
    CaptionedUtterance u;
    u.id = row.at("id").get<std::string>();
    if (row.at("caption").is_string()) {
      std::istringstream tokens(row.at("caption").get<std::string>());
      std::string token;
      while (tokens >> token) u.caption.push_back(token);
    } else {
      u.caption = row.at("caption").get<std::vector<std::string>>();
    }
    for (const auto& w : row.at("hyp_words")) {
      u.hypothesis.push_back({w.at("w").get<std::string>(),
                              w.at("t0").get<double>(),
                              w.at("t1").get<double>()});
    }
    out.push_back(std::move(u));
  }
  return out;
}

void WriteIslandsJsonl(const std::vector<CaptionedUtterance>& utterances,
                       const std::vector<std::vector<Island>>& islands,
                       const std::string& path) {
  if (utterances.size() != islands.size()) {
    throw Error("ShapeError", "islands/utterances size mismatch");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    nlohmann::ordered_json row;
    row["id"] = utterances[i].id;
    row["islands"] = nlohmann::json::array();
    for (const auto& island : islands[i]) {
      nlohmann::ordered_json j;
      j["i0"] = island.begin;
      j["i1"] = island.end;
      j["t0"] = island.t0;
      j["t1"] = island.t1;
      j["words"] = island.words;
      row["islands"].push_back(std::move(j));
    }
    os << row.dump() << '\n';
  }
}

void WriteRetentionCsv(const RetentionStats& stats, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  os << "total_duration,retained_duration,retained_fraction,segment_count\n";
  os.precision(12);
  os << stats.total_duration << ',' << stats.retained_duration << ','
     << stats.retained_fraction << ',' << stats.segment_count << '\n';
}

}  // namespace wordrec
