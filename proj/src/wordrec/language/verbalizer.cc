// wordrec/language/verbalizer.cc

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

#include "wordrec/language/verbalizer.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wordrec/common/error.h"

namespace wordrec {

std::vector<VerbalizerRule> LoadVerbalizerRules(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::map<std::string, std::size_t> index;
  std::vector<VerbalizerRule> rules;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("FormatError", "expected 'written<TAB>expansion': " + line);
    }
    std::string written = line.substr(0, tab);
    std::istringstream tokens(line.substr(tab + 1));
    std::vector<std::string> expansion;
    std::string token;
    while (tokens >> token) expansion.push_back(token);
    if (written.empty() || expansion.empty()) {
      throw Error("FormatError", "rule needs a token and an expansion");
    }
    auto [it, inserted] = index.try_emplace(written, rules.size());
    if (inserted) rules.push_back({written, {}});
    rules[it->second].expansions.push_back(std::move(expansion));
  }
  return rules;
}

void SaveVerbalizerRules(const std::vector<VerbalizerRule>& rules,
                         const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  for (const auto& rule : rules) {
    for (const auto& expansion : rule.expansions) {
      os << rule.written << '\t';
      for (std::size_t i = 0; i < expansion.size(); ++i) {
        if (i) os << ' ';
        os << expansion[i];
      }
      os << '\n';
    }
  }
}

Wfst BuildVerbalizer(const std::vector<VerbalizerRule>& rules,
                     const Vocabulary& written, const Vocabulary& spoken) {
  std::map<std::string, const VerbalizerRule*> by_written;
  for (const auto& rule : rules) {
    if (rule.expansions.empty()) {
      throw Error("RuleError", "rule for '" + rule.written +
                                   "' has no expansions");
    }
    by_written[rule.written] = &rule;
  }

  Wfst v(Semiring::kTropical);
  int hub = v.AddState();
  v.SetStart(hub);
  v.SetFinal(hub, 0.0);

  auto spoken_id = [&](const std::string& word, const std::string& context) {
    int id = spoken.Find(word);
    if (id < 0) {
      throw Error("RuleError",
                  "'" + word + "' (" + context + ") missing from spoken vocab");
    }
    return id;
  };

  for (int wid = 1; wid <= written.size(); ++wid) {
    const std::string& word = written.Word(wid);
    auto it = by_written.find(word);
    if (it == by_written.end()) {
      v.AddArc(hub, {wid, spoken_id(word, "identity mapping"), 0.0, hub});
      continue;
    }
    for (const auto& expansion : it->second->expansions) {
      int from = hub;
      for (std::size_t i = 0; i < expansion.size(); ++i) {
        int olabel = spoken_id(expansion[i], "expansion of '" + word + "'");
        int ilabel = i == 0 ? wid : kEpsilon;
        int to = i + 1 == expansion.size() ? hub : v.AddState();
        v.AddArc(from, {ilabel, olabel, 0.0, to});
        from = to;
      }
    }
  }
  return v;
}

Wfst SentenceAcceptor(const std::vector<int>& word_ids) {
  Wfst a(Semiring::kTropical);
  int state = a.AddState();
  a.SetStart(state);
  for (int id : word_ids) {
    int next = a.AddState();
    a.AddArc(state, {id, id, 0.0, next});
    state = next;
  }
  a.SetFinal(state, 0.0);
  return a;
}

std::vector<std::vector<int>> VerbalizationsOf(
    const std::vector<int>& written_ids, const Wfst& verbalizer) {
  Wfst constrained = Compose(SentenceAcceptor(written_ids), verbalizer);
  Wfst spoken = Project(Connect(constrained), ProjectSide::kOutput);
  std::vector<EnumeratedPath> paths = EnumeratePaths(spoken);
  std::set<std::vector<int>> unique;
  for (const auto& path : paths) unique.insert(path.olabels);
  if (unique.empty()) {
    throw Error("RuleError", "sentence has no verbalization");
  }
  return {unique.begin(), unique.end()};
}

}  // namespace wordrec
