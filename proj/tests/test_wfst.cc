// tests/test_wfst.cc

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
#include <sstream>

#include "support/test-util.h"
#include "wordrec/wfst/symbol-table.h"
#include "wordrec/wfst/wfst.h"

using namespace wordrec;
using wordrec::testing::ErrorKindOf;
using wordrec::testing::JoinPathMultisets;
using wordrec::testing::PathMultiset;
using wordrec::testing::RandomAcyclicFst;

namespace {

// a:b/1 over two states, final weight 0.
Wfst SingleArc(int ilabel, int olabel, double weight) {
  Wfst m(Semiring::kTropical);
  int s0 = m.AddState();
  int s1 = m.AddState();
  m.SetStart(s0);
  m.SetFinal(s1, 0.0);
  m.AddArc(s0, {ilabel, olabel, weight, s1});
  return m;
}

Wfst IdentityLoop(const std::vector<int>& alphabet) {
  Wfst m(Semiring::kTropical);
  int s = m.AddState();
  m.SetStart(s);
  m.SetFinal(s, 0.0);
  for (int label : alphabet) m.AddArc(s, {label, label, 0.0, s});
  return m;
}

}  // namespace

TEST_CASE("compose chains weights through matching labels") {
  Wfst ab = SingleArc(1, 2, 1.0);  // a:b/1
  Wfst bc = SingleArc(2, 3, 2.0);  // b:c/2
  Wfst composed = Compose(ab, bc);
  auto paths = EnumeratePaths(composed);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].ilabels == std::vector<int>{1});
  CHECK(paths[0].olabels == std::vector<int>{3});
  CHECK(paths[0].weight == 3.0);
}

TEST_CASE("compose with an identity acceptor preserves the path set") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    Wfst composed = Compose(a, IdentityLoop({1, 2, 3}));
    CHECK(PathMultiset(composed) == PathMultiset(a));
  }
}

TEST_CASE("compose equals the brute-force path join on random machines") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    Wfst b = RandomAcyclicFst(rng, 5, 3);
    CHECK(PathMultiset(Compose(a, b)) == JoinPathMultisets(a, b));
  }
}

TEST_CASE("compose is associative on path sets") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 4, 2);
    Wfst b = RandomAcyclicFst(rng, 4, 2);
    Wfst c = RandomAcyclicFst(rng, 4, 2);
    CHECK(PathMultiset(Compose(Compose(a, b), c)) ==
          PathMultiset(Compose(a, Compose(b, c))));
  }
}

TEST_CASE("compose rejects mismatched semirings") {
  Wfst a = SingleArc(1, 1, 0.0);
  Wfst b(Semiring::kLog);
  b.SetStart(b.AddState());
  CHECK(ErrorKindOf([&] { Compose(a, b); }) == "SemiringError");
}

TEST_CASE("project copies the chosen side onto both tapes") {
  Wfst m = SingleArc(1, 2, 1.0);
  Wfst out = Project(m, ProjectSide::kOutput);
  CHECK(out.ArcsFrom(0)[0].ilabel == 2);
  CHECK(out.ArcsFrom(0)[0].olabel == 2);
  CHECK(out.ArcsFrom(0)[0].weight == 1.0);
  Wfst in = Project(m, ProjectSide::kInput);
  CHECK(in.ArcsFrom(0)[0].ilabel == 1);
  CHECK(in.ArcsFrom(0)[0].olabel == 1);
}

TEST_CASE("project is idempotent") {
  std::mt19937_64 rng(17);
  Wfst a = RandomAcyclicFst(rng, 5, 3);
  Wfst once = Project(a, ProjectSide::kOutput);
  Wfst twice = Project(once, ProjectSide::kOutput);
  CHECK(PathMultiset(once) == PathMultiset(twice));
}

TEST_CASE("invert swaps tapes and is an involution") {
  Wfst m = SingleArc(1, 2, 1.0);
  Wfst inv = Invert(m);
  CHECK(inv.ArcsFrom(0)[0].ilabel == 2);
  CHECK(inv.ArcsFrom(0)[0].olabel == 1);

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    CHECK(PathMultiset(Invert(Invert(a))) == PathMultiset(a));
  }
}

TEST_CASE("compose with the inverse pairs inputs with themselves") {
  std::mt19937_64 rng(23);
  Wfst a = RandomAcyclicFst(rng, 5, 3, /*epsilon_prob=*/0.0);
  Wfst paired = Compose(a, Invert(a));
  std::set<std::pair<std::vector<int>, std::vector<int>>> pairs;
  for (const auto& p : EnumeratePaths(paired)) {
    pairs.insert({p.ilabels, p.olabels});
  }
  for (const auto& p : EnumeratePaths(a)) {
    CHECK(pairs.count({p.ilabels, p.ilabels}) == 1);
  }
}

TEST_CASE("shortest path on a single arc") {
  Wfst m = SingleArc(1, 1, 7.0);
  auto r = ShortestPath(m);
  CHECK(r.weight == 7.0);
  CHECK(r.olabels == std::vector<int>{1});
}

TEST_CASE("shortest path picks the lighter diamond branch") {
  Wfst m(Semiring::kTropical);
  for (int i = 0; i < 4; ++i) m.AddState();
  m.SetStart(0);
  m.SetFinal(3, 0.0);
  m.AddArc(0, {1, 1, 2.0, 1});
  m.AddArc(1, {2, 2, 5.0, 3});
  m.AddArc(0, {3, 3, 3.0, 2});
  m.AddArc(2, {4, 4, 3.0, 3});
  auto r = ShortestPath(m);
  CHECK(r.weight == 6.0);
  CHECK(r.olabels == std::vector<int>{3, 4});
}

TEST_CASE("shortest path ties break toward the smaller output string") {
  Wfst m(Semiring::kTropical);
  for (int i = 0; i < 2; ++i) m.AddState();
  m.SetStart(0);
  m.SetFinal(1, 0.0);
  m.AddArc(0, {1, 5, 1.0, 1});
  m.AddArc(0, {2, 3, 1.0, 1});
  auto r = ShortestPath(m);
  CHECK(r.olabels == std::vector<int>{3});

  // A shorter sequence that is a prefix of a longer one is smaller.
  Wfst p(Semiring::kTropical);
  for (int i = 0; i < 3; ++i) p.AddState();
  p.SetStart(0);
  p.SetFinal(1, 0.0);
  p.AddArc(0, {1, 3, 1.0, 1});
  p.AddArc(0, {1, 3, 0.5, 2});
  p.AddArc(2, {1, 4, 0.5, 1});
  auto rp = ShortestPath(p);
  CHECK(rp.weight == 1.0);
  CHECK(rp.olabels == std::vector<int>{3});
}

TEST_CASE("shortest path weight equals the enumerated minimum") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    double best = kInfiniteWeight;
    for (const auto& p : EnumeratePaths(a)) best = std::min(best, p.weight);
    if (best == kInfiniteWeight) {
      CHECK(ErrorKindOf([&] { ShortestPath(a); }) == "EmptyMachine");
    } else {
      CHECK(ShortestPath(a).weight == best);
    }
  }
}

TEST_CASE("shortest path faults on machines without accepting paths") {
  Wfst m(Semiring::kTropical);
  int s0 = m.AddState();
  m.AddState();
  m.SetStart(s0);
  m.AddArc(s0, {1, 1, 1.0, 1});  // state 1 is not final
  CHECK(ErrorKindOf([&] { ShortestPath(m); }) == "EmptyMachine");
}

TEST_CASE("connect removes dangling states and keeps the path set") {
  Wfst m(Semiring::kTropical);
  for (int i = 0; i < 4; ++i) m.AddState();
  m.SetStart(0);
  m.SetFinal(1, 0.25);
  m.AddArc(0, {1, 1, 1.0, 1});
  m.AddArc(0, {2, 2, 1.0, 2});  // dead end
  m.AddArc(3, {3, 3, 1.0, 1});  // unreachable
  Wfst trimmed = Connect(m);
  CHECK(trimmed.NumStates() == 2);
  CHECK(PathMultiset(trimmed) == PathMultiset(m));

  Wfst again = Connect(trimmed);
  CHECK(again.NumStates() == trimmed.NumStates());
  CHECK(PathMultiset(again) == PathMultiset(trimmed));
}

TEST_CASE("connect on random machines never changes the path multiset") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    CHECK(PathMultiset(Connect(a)) == PathMultiset(a));
  }
}

TEST_CASE("scale weights multiplies arcs and finals") {
  Wfst m = SingleArc(1, 1, 2.0);
  m.SetFinal(1, 3.0);
  Wfst half = ScaleWeights(m, 0.5);
  CHECK(half.ArcsFrom(0)[0].weight == 1.0);
  CHECK(half.FinalWeight(1) == 1.5);
}

TEST_CASE("text format round trips bit-exactly") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    std::ostringstream first;
    WriteFstText(a, first);
    std::istringstream reread(first.str());
    Wfst b = ReadFstText(reread);
    std::ostringstream second;
    WriteFstText(b, second);
    CHECK(first.str() == second.str());
    CHECK(PathMultiset(a) == PathMultiset(b));
    CHECK(b.Start() == a.Start());
  }
}

TEST_CASE("text format keeps fractional weights exact") {
  Wfst m = SingleArc(1, 2, 0.1);  // no finite binary expansion
  m.SetFinal(1, 1e-300);
  std::ostringstream os;
  WriteFstText(m, os);
  std::istringstream is(os.str());
  Wfst back = ReadFstText(is);
  CHECK(back.ArcsFrom(0)[0].weight == 0.1);
  CHECK(back.FinalWeight(1) == 1e-300);
}

TEST_CASE("symbol tables round trip") {
  SymbolTable table;
  table.AddSymbol("hello");
  table.AddSymbol("world");
  std::string path = "symtab_test.tsv";
  table.Save(path);
  SymbolTable loaded = SymbolTable::Load(path);
  CHECK(loaded.Find("hello") == 1);
  CHECK(loaded.Find("world") == 2);
  CHECK(loaded.Find(0) == "<eps>");
  CHECK(loaded.Find("absent") == -1);
  std::remove(path.c_str());
}

TEST_CASE("every operation returns arcs that reference existing states") {
  std::mt19937_64 rng(41);
  auto check_valid = [](const Wfst& m) {
    for (int s = 0; s < m.NumStates(); ++s) {
      for (const Arc& arc : m.ArcsFrom(s)) {
        CHECK(arc.dst >= 0);
        CHECK(arc.dst < m.NumStates());
      }
    }
  };
  for (int trial = 0; trial < 20; ++trial) {
    Wfst a = RandomAcyclicFst(rng, 5, 3);
    Wfst b = RandomAcyclicFst(rng, 5, 3);
    check_valid(Compose(a, b));
    check_valid(Project(a, ProjectSide::kOutput));
    check_valid(Invert(a));
    check_valid(Connect(a));
    check_valid(ScaleWeights(a, 2.0));
  }
}
