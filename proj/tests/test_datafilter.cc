// tests/test_datafilter.cc

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

#include <cmath>
#include <cstdio>
#include <random>

#include "support/test-util.h"
#include "support/toy-corpus.h"
#include "wordrec/datafilter/islands.h"

using namespace wordrec;
using wordrec::testing::ErrorKindOf;
using wordrec::testing::MakePlantedCaptions;

namespace {

CaptionedUtterance MakeUtterance(const std::vector<std::string>& caption,
                                 const std::vector<std::string>& hyp) {
  CaptionedUtterance u;
  u.id = "u";
  u.caption = caption;
  double t = 0.0;
  for (const auto& w : hyp) {
    u.hypothesis.push_back({w, t, t + 1.0});
    t += 1.0;
  }
  return u;
}

}  // namespace

TEST_CASE("a perfect caption is one island covering everything") {
  auto u = MakeUtterance({"a", "b", "c"}, {"a", "b", "c"});
  auto islands = FindIslands(u, 1);
  REQUIRE(islands.size() == 1);
  CHECK(islands[0].begin == 0);
  CHECK(islands[0].end == 3);
  CHECK(islands[0].t0 == 0.0);
  CHECK(islands[0].t1 == 3.0);
  CHECK(islands[0].words == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("disjoint word sets yield no islands") {
  auto u = MakeUtterance({"a", "b"}, {"x", "y"});
  CHECK(FindIslands(u, 1).empty());
}

TEST_CASE("a substitution splits the alignment into two islands") {
  auto u = MakeUtterance({"a", "b", "c", "d", "e"},
                         {"a", "b", "x", "d", "e"});
  auto islands = FindIslands(u, 2);
  REQUIRE(islands.size() == 2);
  CHECK(islands[0].words == std::vector<std::string>{"a", "b"});
  CHECK(islands[0].begin == 0);
  CHECK(islands[0].end == 2);
  CHECK(islands[1].words == std::vector<std::string>{"d", "e"});
  CHECK(islands[1].begin == 3);
  CHECK(islands[1].end == 5);
  // min_island = 3 drops both two-word runs.
  CHECK(FindIslands(u, 3).empty());
}

TEST_CASE("matching is lowercased") {
  auto u = MakeUtterance({"Hello", "World"}, {"hello", "world"});
  CHECK(FindIslands(u, 2).size() == 1);
}

TEST_CASE("min_island is validated") {
  auto u = MakeUtterance({"a"}, {"a"});
  CHECK(ErrorKindOf([&] { FindIslands(u, 0); }) == "ConfigError");
}

TEST_CASE("islands are disjoint, sorted, and mirror the caption") {
  std::mt19937_64 rng(3);
  auto planted = MakePlantedCaptions(20, rng);
  for (const auto& u : planted.utterances) {
    auto islands = FindIslands(u, 3);
    int previous_end = -1;
    for (const auto& island : islands) {
      CHECK(island.begin > previous_end);
      previous_end = island.end - 1;
      CHECK(island.end - island.begin >= 3);
      for (int i = island.begin; i < island.end; ++i) {
        CHECK(u.hypothesis[i].word == island.words[i - island.begin]);
      }
    }
  }
}

TEST_CASE("raising min_island never increases retained duration") {
  std::mt19937_64 rng(5);
  auto planted = MakePlantedCaptions(10, rng);
  double previous = 1e300;
  for (int min_island : {1, 2, 3, 5, 8, 12}) {
    std::vector<std::vector<Island>> islands;
    for (const auto& u : planted.utterances) {
      islands.push_back(FindIslands(u, min_island));
    }
    RetentionStats stats = ComputeRetention(islands, planted.utterances);
    CHECK(stats.retained_duration <= previous + 1e-12);
    previous = stats.retained_duration;
  }
}

TEST_CASE("planted corpora filter with high precision and recall") {
  std::mt19937_64 rng(7);
  auto planted = MakePlantedCaptions(40, rng);
  std::int64_t kept_good = 0, kept_total = 0, good_total = 0;
  for (std::size_t i = 0; i < planted.utterances.size(); ++i) {
    auto islands = FindIslands(planted.utterances[i], 3);
    std::vector<bool> kept(planted.utterances[i].hypothesis.size(), false);
    for (const auto& island : islands) {
      for (int j = island.begin; j < island.end; ++j) kept[j] = true;
    }
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (kept[j]) {
        ++kept_total;
        if (planted.good[i][j]) ++kept_good;
      }
      if (planted.good[i][j]) ++good_total;
    }
  }
  double precision = static_cast<double>(kept_good) / kept_total;
  double recall = static_cast<double>(kept_good) / good_total;
  CHECK(precision >= 0.9);
  CHECK(recall >= 0.9);
}

TEST_CASE("retention endpoints") {
  auto full = MakeUtterance({"a", "b", "c"}, {"a", "b", "c"});
  std::vector<std::vector<Island>> islands{FindIslands(full, 1)};
  RetentionStats all = ComputeRetention(islands, {full});
  CHECK(all.retained_fraction == doctest::Approx(1.0));
  CHECK(all.segment_count == 1);

  auto none = MakeUtterance({"a", "b", "c"}, {"x", "y", "z"});
  std::vector<std::vector<Island>> empty{FindIslands(none, 1)};
  RetentionStats zero = ComputeRetention(empty, {none});
  CHECK(zero.retained_fraction == 0.0);
  CHECK(zero.segment_count == 0);
}

TEST_CASE("caption bias: weight 0 returns the background unchanged") {
  Vocabulary vocab(VocabDomain::kWritten);
  for (const char* w : {"a", "b", "c"}) vocab.AddWord(w, 1);
  NGramLm background =
      TrainNgram({{"a", "b"}, {"b", "c"}, {"a"}}, 2, vocab);
  NGramLm biased = CaptionBiasedLm(background, {"a", "b"}, 0.0, vocab);
  for (int w = 1; w <= 3; ++w) {
    CHECK(biased.LogProb({1}, w) == background.LogProb({1}, w));
  }
  NGramLm empty_caption = CaptionBiasedLm(background, {}, 0.7, vocab);
  CHECK(empty_caption.LogProb({2}, 3) == background.LogProb({2}, 3));
}

TEST_CASE("caption bias pulls caption n-grams up") {
  Vocabulary vocab(VocabDomain::kWritten);
  for (const char* w : {"a", "b", "c"}) vocab.AddWord(w, 1);
  NGramLm background =
      TrainNgram({{"a", "c"}, {"b", "c"}, {"c", "a"}}, 2, vocab);
  int a = vocab.Find("a"), b = vocab.Find("b");
  NGramLm biased = CaptionBiasedLm(background, {"a", "b"}, 1.0, vocab);
  CHECK(std::exp(biased.LogProb({a}, b)) >=
        std::exp(background.LogProb({a}, b)));

  NGramLm half = CaptionBiasedLm(background, {"a", "b"}, 0.5, vocab);
  double expect = 0.5 * std::exp(background.LogProb({a}, b)) +
                  0.5 * std::exp(CaptionBiasedLm(background, {"a", "b"}, 1.0,
                                                 vocab)
                                     .LogProb({a}, b));
  CHECK(std::exp(half.LogProb({a}, b)) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("interpolated rows still sum to one") {
  Vocabulary vocab(VocabDomain::kWritten);
  for (const char* w : {"a", "b", "c", "d"}) vocab.AddWord(w, 1);
  NGramLm background =
      TrainNgram({{"a", "b", "c"}, {"d", "a"}, {"b"}}, 2, vocab);
  NGramLm biased = CaptionBiasedLm(background, {"a", "d", "d"}, 0.3, vocab);
  CHECK(biased.SumConditional({}) == doctest::Approx(1.0).epsilon(1e-6));
  for (int w = 1; w <= 4; ++w) {
    CHECK(biased.SumConditional({w}) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("caption weight is validated") {
  Vocabulary vocab(VocabDomain::kWritten);
  vocab.AddWord("a", 1);
  NGramLm background = TrainNgram({{"a"}}, 1, vocab);
  CHECK(ErrorKindOf([&] {
          CaptionBiasedLm(background, {"a"}, 1.5, vocab);
        }) == "ConfigError");
}

TEST_CASE("captioned utterances round trip through jsonl") {
  std::mt19937_64 rng(11);
  auto planted = MakePlantedCaptions(3, rng);
  std::string in_path = "captions_test.jsonl";
  std::string out_path = "islands_test.jsonl";
  std::string csv_path = "stats_test.csv";
  {
    std::ofstream os(in_path);
    for (const auto& u : planted.utterances) {
      os << R"({"id":")" << u.id << R"(","caption":")";
      for (std::size_t i = 0; i < u.caption.size(); ++i) {
        if (i) os << ' ';
        os << u.caption[i];
      }
      os << R"(","hyp_words":[)";
      for (std::size_t i = 0; i < u.hypothesis.size(); ++i) {
        if (i) os << ',';
        os << R"({"w":")" << u.hypothesis[i].word << R"(","t0":)"
           << u.hypothesis[i].t0 << R"(,"t1":)" << u.hypothesis[i].t1 << "}";
      }
      os << "]}\n";
    }
  }
  auto loaded = ReadCaptionedJsonl(in_path);
  REQUIRE(loaded.size() == planted.utterances.size());
  CHECK(loaded[0].caption == planted.utterances[0].caption);
  CHECK(loaded[0].hypothesis.size() == planted.utterances[0].hypothesis.size());

  std::vector<std::vector<Island>> islands;
  for (const auto& u : loaded) islands.push_back(FindIslands(u, 3));
  WriteIslandsJsonl(loaded, islands, out_path);
  WriteRetentionCsv(ComputeRetention(islands, loaded), csv_path);
  std::ifstream check(out_path);
  std::string line;
  int rows = 0;
  while (std::getline(check, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
  std::remove(csv_path.c_str());
}
