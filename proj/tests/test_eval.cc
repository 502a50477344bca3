// tests/test_eval.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "support/test-util.h"
#include "wordrec/eval/wer.h"
#include "wordrec/language/ngram.h"
#include "wordrec/language/verbalizer.h"

using namespace wordrec;
using wordrec::testing::ErrorKindOf;
using wordrec::testing::PathMultiset;

namespace {

using Sentences = std::map<std::string, std::vector<std::string>>;

Vocabulary VocabOf(const std::vector<std::string>& words, VocabDomain domain) {
  Vocabulary v(domain);
  for (const auto& w : words) v.AddWord(w, 1);
  return v;
}

}  // namespace

TEST_CASE("equal reference and hypothesis score zero") {
  Sentences refs{{"u1", {"a", "b", "c"}}};
  Sentences hyps{{"u1", {"a", "b", "c"}}};
  WerReport report = Wer(refs, hyps);
  CHECK(report.Wer() == 0.0);
  CHECK(report.NumErrors() == 0);
}

TEST_CASE("an empty hypothesis is all deletions") {
  Sentences refs{{"u1", {"a", "b", "c", "d"}}};
  Sentences hyps{{"u1", {}}};
  WerReport report = Wer(refs, hyps);
  CHECK(report.deletions == 4);
  CHECK(report.Wer() == 1.0);
}

TEST_CASE("a dropped word is one deletion out of three") {
  Sentences refs{{"u1", {"a", "b", "c"}}};
  Sentences hyps{{"u1", {"a", "c"}}};
  WerReport report = Wer(refs, hyps);
  CHECK(report.deletions == 1);
  CHECK(report.substitutions == 0);
  CHECK(report.insertions == 0);
  CHECK(report.Wer() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("equal-cost alignments prefer substitutions") {
  Sentences refs{{"u1", {"a"}}};
  Sentences hyps{{"u1", {"b", "c"}}};
  WerReport report = Wer(refs, hyps);
  CHECK(report.substitutions == 1);
  CHECK(report.insertions == 1);
  CHECK(report.deletions == 0);
}

TEST_CASE("wer is not symmetric in its arguments") {
  Sentences two{{"u1", {"a", "b"}}};
  Sentences one{{"u1", {"a"}}};
  WerReport forward = Wer(two, one);
  WerReport backward = Wer(one, two);
  CHECK(forward.Wer() == doctest::Approx(0.5));
  CHECK(backward.Wer() == doctest::Approx(1.0));
}

TEST_CASE("hypotheses without references fault; bare references score") {
  Sentences refs{{"u1", {"a"}}};
  Sentences hyps{{"u2", {"a"}}};
  CHECK(ErrorKindOf([&] { Wer(refs, hyps); }) == "MissingRef");

  Sentences more_refs{{"u1", {"a"}}, {"u2", {"b", "c"}}};
  Sentences one_hyp{{"u1", {"a"}}};
  WerReport report = Wer(more_refs, one_hyp);
  CHECK(report.deletions == 2);  // u2 scored against nothing
}

TEST_CASE("tokens are lowercased and stripped of trailing punctuation") {
  Sentences refs{{"u1", {"Hello,", "World!"}}};
  Sentences hyps{{"u1", {"hello", "world"}}};
  CHECK(Wer(refs, hyps).NumErrors() == 0);
  CHECK(NormalizeToken("Three.") == "three");
  CHECK(NormalizeToken("104") == "104");
}

TEST_CASE("counts match the DP oracle on an edit-heavy pair") {
  Sentences refs{{"u1", {"w", "x", "y", "z", "w"}}};
  Sentences hyps{{"u1", {"x", "q", "z", "w", "w"}}};
  WerReport report = Wer(refs, hyps);
  // Distance 3: delete leading w, substitute y->q, insert trailing w;
  // equal-cost variants trade one sub for ins+del, and the tie-break
  // maximizes substitutions.
  CHECK(report.NumErrors() == 3);
  CHECK(report.substitutions >= 1);
}

TEST_CASE("spoken references enumerate the verbalizations") {
  Vocabulary written = VocabOf({"104", "cat"}, VocabDomain::kWritten);
  Vocabulary spoken = VocabOf(
      {"one", "hundred", "four", "oh", "cat"}, VocabDomain::kSpoken);
  std::vector<VerbalizerRule> rules = {
      {"104", {{"one", "hundred", "four"}, {"one", "oh", "four"}}}};
  Wfst v = BuildVerbalizer(rules, written, spoken);

  Sentences refs{{"u1", {"104"}}, {"u2", {"cat"}}};
  auto alternatives = SpokenReferences(refs, v, written, spoken);
  REQUIRE(alternatives.at("u1").size() == 2);
  REQUIRE(alternatives.at("u2").size() == 1);
  CHECK(alternatives.at("u2")[0] == std::vector<std::string>{"cat"});

  Sentences hyps{{"u1", {"one", "oh", "four"}}, {"u2", {"cat"}}};
  WerReport report = WerAgainstAlternatives(alternatives, hyps);
  CHECK(report.NumErrors() == 0);
  CHECK(report.ref_length == 4);  // chosen alternative lengths: 3 + 1

  Sentences unknown{{"u3", {"dog"}}};
  CHECK(ErrorKindOf([&] {
          SpokenReferences(unknown, v, written, spoken);
        }) == "RuleError");
}

TEST_CASE("alternative scoring picks the closest verbalization") {
  std::vector<std::vector<std::string>> alts = {
      {"one", "hundred", "four"}, {"one", "oh", "four"}};
  std::map<std::string, std::vector<std::vector<std::string>>> refs{
      {"u1", alts}};
  Sentences hyps{{"u1", {"one", "oh", "five"}}};
  WerReport report = WerAgainstAlternatives(refs, hyps);
  CHECK(report.NumErrors() == 1);  // against one-oh-four, not one-hundred-four
  CHECK(report.ref_length == 3);
}

TEST_CASE("spoken scoring beats written scoring on verbalized output") {
  Vocabulary written = VocabOf({"flight", "104"}, VocabDomain::kWritten);
  Vocabulary spoken = VocabOf(
      {"flight", "one", "oh", "four", "hundred"}, VocabDomain::kSpoken);
  std::vector<VerbalizerRule> rules = {
      {"104", {{"one", "oh", "four"}, {"one", "hundred", "four"}}}};
  Wfst v = BuildVerbalizer(rules, written, spoken);

  Sentences written_refs{{"u1", {"flight", "104"}}};
  Sentences hyps{{"u1", {"flight", "one", "oh", "four"}}};
  WerReport literal = Wer(written_refs, hyps);
  WerReport spoken_scored =
      WerAgainstAlternatives(SpokenReferences(written_refs, v, written, spoken),
                             hyps);
  CHECK(spoken_scored.Wer() <= literal.Wer());
  CHECK(spoken_scored.NumErrors() == 0);
  CHECK(literal.NumErrors() == 3);  // "three vs 3"-style artificial errors
}

TEST_CASE("spoken_lm with an identity verbalizer is the projected lm") {
  Vocabulary written = VocabOf({"a", "b"}, VocabDomain::kWritten);
  NGramLm lm = TrainNgram({{"a", "b"}, {"b"}}, 2, written);
  Wfst g = LmToFst(lm);
  Wfst identity = BuildVerbalizer({}, written, written);
  Wfst spoken = SpokenLm(g, identity);
  CHECK(PathMultiset(Connect(Compose(SentenceAcceptor({1, 2}), spoken))) ==
        PathMultiset(Connect(Compose(SentenceAcceptor({1, 2}),
                                     Project(g, ProjectSide::kOutput)))));
}

TEST_CASE("spoken_lm scores verbalizations with the written weight") {
  Vocabulary written = VocabOf({"104"}, VocabDomain::kWritten);
  Vocabulary spoken = VocabOf({"one", "oh", "four"}, VocabDomain::kSpoken);
  std::vector<VerbalizerRule> rules = {{"104", {{"one", "oh", "four"}}}};
  Wfst v = BuildVerbalizer(rules, written, spoken);
  NGramLm lm = TrainNgram({{"104"}, {"104"}}, 1, written);
  Wfst g = LmToFst(lm);

  double written_score =
      ShortestPath(Connect(Compose(SentenceAcceptor({written.Find("104")}),
                                   g)))
          .weight;
  Wfst sg = SpokenLm(g, v);
  std::vector<int> spoken_ids = {spoken.Find("one"), spoken.Find("oh"),
                                 spoken.Find("four")};
  double spoken_score =
      ShortestPath(Connect(Compose(SentenceAcceptor(spoken_ids), sg))).weight;
  CHECK(spoken_score == doctest::Approx(written_score).epsilon(1e-12));

  // Fully projected: no arc disagrees between tapes.
  for (int s = 0; s < sg.NumStates(); ++s) {
    for (const Arc& arc : sg.ArcsFrom(s)) {
      CHECK(arc.ilabel == arc.olabel);
    }
  }
}

TEST_CASE("report and alignment dumps write") {
  Sentences refs{{"u1", {"a", "b"}}};
  Sentences hyps{{"u1", {"a", "x"}}};
  WerReport report = Wer(refs, hyps);
  WriteReportJson(report, "report_test.json");
  WriteAlignmentText(report, "aligned_test.txt");
  std::ifstream json("report_test.json");
  std::string all((std::istreambuf_iterator<char>(json)),
                  std::istreambuf_iterator<char>());
  CHECK(all.find("\"substitutions\": 1") != std::string::npos);
  std::ifstream txt("aligned_test.txt");
  std::string first;
  std::getline(txt, first);
  CHECK(first == "u1");
  std::remove("report_test.json");
  std::remove("aligned_test.txt");
}

TEST_CASE("hypothesis jsonl parses both word forms") {
  {
    std::ofstream os("hyps_test.jsonl");
    os << R"({"id":"u1","words":["a","b"]})" << "\n";
    os << R"({"id":"u2","words":"c d"})" << "\n";
  }
  auto hyps = ReadHypsJsonl("hyps_test.jsonl");
  CHECK(hyps.at("u1") == std::vector<std::string>{"a", "b"});
  CHECK(hyps.at("u2") == std::vector<std::string>{"c", "d"});
  std::remove("hyps_test.jsonl");
}
