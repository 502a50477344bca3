// wordrec/eval/wer.cc

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

#include "wordrec/eval/wer.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wordrec/common/error.h"
#include "wordrec/language/verbalizer.h"

namespace wordrec {

std::string NormalizeToken(const std::string& token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty()) {
    char back = out.back();
    if (back == '.' || back == ',' || back == '!' || back == '?' ||
        back == ';' || back == ':') {
      out.pop_back();
    } else {
      break;
    }
  }
  return out;
}

namespace {

std::vector<std::string> NormalizeAll(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    std::string n = NormalizeToken(w);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

// DP over normalized tokens; backtrace prefers the diagonal so equal-cost
// alignments maximize substitutions over insertion+deletion pairs.
UtteranceScore ScorePair(const std::vector<std::string>& ref_raw,
                         const std::vector<std::string>& hyp_raw) {
  std::vector<std::string> ref = NormalizeAll(ref_raw);
  std::vector<std::string> hyp = NormalizeAll(hyp_raw);
  const int n = static_cast<int>(ref.size());
  const int m = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 0; i <= n; ++i) cost[i][0] = i;
  for (int j = 0; j <= m; ++j) cost[0][j] = j;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      int diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  UtteranceScore score;
  score.ref_length = n;
  int i = n, j = m;
  std::vector<AlignedPair> rev;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        cost[i][j] == cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      bool eq = ref[i - 1] == hyp[j - 1];
      rev.push_back({ref[i - 1], hyp[j - 1], eq ? 'C' : 'S'});
      if (!eq) ++score.substitutions;
      --i;
      --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      rev.push_back({ref[i - 1], "", 'D'});
      ++score.deletions;
      --i;
    } else {
      rev.push_back({"", hyp[j - 1], 'I'});
      ++score.insertions;
      --j;
    }
  }
  score.alignment.assign(rev.rbegin(), rev.rend());
  return score;
}

void AccumulateScore(WerReport* report, const std::string& id,
                     UtteranceScore score) {
  report->substitutions += score.substitutions;
  report->insertions += score.insertions;
  report->deletions += score.deletions;
  report->ref_length += score.ref_length;
  report->utterances[id] = std::move(score);
}

}  // namespace

WerReport Wer(const std::map<std::string, std::vector<std::string>>& refs,
              const std::map<std::string, std::vector<std::string>>& hyps) {
  for (const auto& [id, hyp] : hyps) {
    (void)hyp;
    if (!refs.count(id)) {
      throw Error("MissingRef", "hypothesis '" + id + "' has no reference");
    }
  }
  WerReport report;
  for (const auto& [id, ref] : refs) {
    auto it = hyps.find(id);
    static const std::vector<std::string> kEmpty;
    AccumulateScore(&report, id,
                    ScorePair(ref, it == hyps.end() ? kEmpty : it->second));
  }
  return report;
}

std::map<std::string, std::vector<std::vector<std::string>>> SpokenReferences(
    const std::map<std::string, std::vector<std::string>>& written_refs,
    const Wfst& verbalizer, const Vocabulary& written,
    const Vocabulary& spoken) {
  std::map<std::string, std::vector<std::vector<std::string>>> out;
  for (const auto& [id, words] : written_refs) {
    std::vector<int> ids;
    ids.reserve(words.size());
    for (const auto& w : words) {
      int wid = written.Find(w);
      if (wid < 0) {
        throw Error("RuleError",
                    "reference word '" + w + "' not in written vocabulary");
      }
      ids.push_back(wid);
    }
    std::vector<std::vector<int>> alternatives;
    try {
      alternatives = VerbalizationsOf(ids, verbalizer);
    } catch (const Error& e) {
      if (e.kind() == "RuleError") {
        throw Error("RuleError", "utterance '" + id + "': " + e.what());
      }
      throw;
    }
    std::vector<std::vector<std::string>> spoken_alts;
    for (const auto& alt : alternatives) {
      std::vector<std::string> sentence;
      sentence.reserve(alt.size());
      for (int sid : alt) sentence.push_back(spoken.Word(sid));
      spoken_alts.push_back(std::move(sentence));
    }
    out[id] = std::move(spoken_alts);
  }
  return out;
}

WerReport WerAgainstAlternatives(
    const std::map<std::string, std::vector<std::vector<std::string>>>& refs,
    const std::map<std::string, std::vector<std::string>>& hyps) {
  for (const auto& [id, hyp] : hyps) {
    (void)hyp;
    if (!refs.count(id)) {
      throw Error("MissingRef", "hypothesis '" + id + "' has no reference");
    }
  }
  WerReport report;
  for (const auto& [id, alternatives] : refs) {
    if (alternatives.empty()) {
      throw Error("RuleError", "utterance '" + id + "' has no alternatives");
    }
    auto it = hyps.find(id);
    static const std::vector<std::string> kEmpty;
    const std::vector<std::string>& hyp =
        it == hyps.end() ? kEmpty : it->second;
    UtteranceScore best;
    bool have_best = false;
    for (const auto& alt : alternatives) {
      UtteranceScore s = ScorePair(alt, hyp);
      if (!have_best || s.substitutions + s.insertions + s.deletions <
                            best.substitutions + best.insertions +
                                best.deletions) {
        best = std::move(s);
        have_best = true;
      }
    }
    AccumulateScore(&report, id, std::move(best));
  }
  return report;
}

Wfst SpokenLm(const Wfst& lm, const Wfst& verbalizer) {
  return Project(Compose(lm, verbalizer), ProjectSide::kOutput);
}

std::map<std::string, std::vector<std::string>> ReadHypsJsonl(
    const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded()) throw Error("FormatError", "bad JSONL: " + line);
    std::string id = row.at("id").get<std::string>();
    std::vector<std::string> words;
    if (row.at("words").is_string()) {
      std::istringstream tokens(row.at("words").get<std::string>());
      std::string token;
      while (tokens >> token) words.push_back(token);
    } else {
      words = row.at("words").get<std::vector<std::string>>();
    }
    if (!out.emplace(id, std::move(words)).second) {
      throw Error("FormatError", "duplicate utterance id '" + id + "'");
    }
  }
  return out;
}

void WriteReportJson(const WerReport& report, const std::string& path) {
  nlohmann::ordered_json j;
  j["wer"] = report.Wer();
  j["substitutions"] = report.substitutions;
  j["insertions"] = report.insertions;
  j["deletions"] = report.deletions;
  j["reference_length"] = report.ref_length;
  j["num_errors"] = report.NumErrors();
  nlohmann::ordered_json utts;
  for (const auto& [id, s] : report.utterances) {
    utts[id] = {{"substitutions", s.substitutions},
                {"insertions", s.insertions},
                {"deletions", s.deletions},
                {"reference_length", s.ref_length}};
  }
  j["utterances"] = std::move(utts);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  os << j.dump(2) << '\n';
}

void WriteAlignmentText(const WerReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  for (const auto& [id, s] : report.utterances) {
    os << id << '\n';
    std::string ref_line = "REF:";
    std::string hyp_line = "HYP:";
    std::string op_line = "OP :";
    for (const auto& pair : s.alignment) {
      std::size_t width = std::max({pair.ref.size(), pair.hyp.size(),
                                    std::size_t{1}});
      auto pad = [width](const std::string& s) {
        return " " + s + std::string(width - s.size(), ' ');
      };
      ref_line += pad(pair.ref.empty() ? "*" : pair.ref);
      hyp_line += pad(pair.hyp.empty() ? "*" : pair.hyp);
      op_line += pad(std::string(1, pair.op));
    }
    os << ref_line << '\n' << hyp_line << '\n' << op_line << '\n' << '\n';
  }
}

}  // namespace wordrec
