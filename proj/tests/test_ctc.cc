// tests/test_ctc.cc

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
#include <random>

#include "support/test-util.h"
#include "wordrec/ctc/ctc.h"

using namespace wordrec;
using wordrec::testing::ErrorKindOf;
using wordrec::testing::RandomGrid;

namespace {

PosteriorGrid UniformGrid(int t, int k) {
  PosteriorGrid grid;
  grid.values = Eigen::MatrixXd::Constant(t, k, 1.0 / k);
  return grid;
}

PosteriorGrid GridFromRows(const std::vector<std::vector<double>>& rows) {
  PosteriorGrid grid;
  grid.values.resize(rows.size(), rows[0].size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t k = 0; k < rows[t].size(); ++k) {
      grid.values(t, k) = rows[t][k];
    }
  }
  return grid;
}

// Exhaustive max-probability path for small instances.
double BruteForceBestPathLogProb(const PosteriorGrid& grid,
                                 const LabelSequence& labels) {
  const int t_count = grid.num_frames();
  const int k = grid.num_labels();
  std::vector<int> path(t_count, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    if (CollapsePath(path) == labels) {
      double lp = 0.0;
      for (int t = 0; t < t_count; ++t) lp += std::log(grid.values(t, path[t]));
      best = std::max(best, lp);
    }
    int pos = t_count - 1;
    while (pos >= 0 && path[pos] == k - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }
  return best;
}

}  // namespace

TEST_CASE("lattice shapes and skip-arc rules") {
  CtcLattice single({1});  // (blank, a, blank)
  CHECK(single.num_states() == 3);
  CHECK(single.StateLabel(0) == kBlankId);
  CHECK(single.StateLabel(1) == 1);
  CHECK_FALSE(single.HasSkip(0));
  CHECK_FALSE(single.HasSkip(1));  // no label beyond
  CHECK(single.IsInitial(0));
  CHECK(single.IsInitial(1));
  CHECK(single.IsFinal(1));
  CHECK(single.IsFinal(2));

  CtcLattice repeated({1, 1});
  CHECK(repeated.num_states() == 5);
  CHECK_FALSE(repeated.HasSkip(1));  // identical labels force the blank
  CHECK(repeated.MinFrames() == 3);

  CtcLattice distinct({1, 2});
  CHECK(distinct.HasSkip(1));
  CHECK(distinct.MinFrames() == 2);

  CtcLattice empty({});
  CHECK(empty.num_states() == 1);
  CHECK(empty.IsFinal(0));

  CHECK(ErrorKindOf([] { CtcLattice bad({1, kBlankId}); }) == "InvalidLabel");
}

TEST_CASE("repeated labels never collapse without a separating blank") {
  // Brute-force confirmation of the skip-arc rule: over two frames, "aa"
  // collapses to [a], so no two-frame path can produce [a, a].
  PosteriorGrid grid = UniformGrid(2, 3);
  CHECK(ErrorKindOf([&] { BruteForceLoss(grid, {1, 1}); }) == "NoAlignment");
  CHECK(ErrorKindOf([&] {
          CtcLossGrad(grid, CtcLattice({1, 1}));
        }) == "NoAlignment");
  // With three frames the forced-blank path exists: a _ a.
  PosteriorGrid grid3 = UniformGrid(3, 3);
  CHECK(CtcLossGrad(grid3, CtcLattice({1, 1})).loss ==
        doctest::Approx(BruteForceLoss(grid3, {1, 1})).epsilon(1e-12));
}

TEST_CASE("single-frame loss is the label's negative log posterior") {
  PosteriorGrid grid = GridFromRows({{0.2, 0.5, 0.3}});
  CtcResult res = CtcLossGrad(grid, CtcLattice({1}));
  CHECK(res.loss == doctest::Approx(-std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("two uniform frames over {blank,a,b} give loss ln 3") {
  PosteriorGrid grid = UniformGrid(2, 3);
  CtcResult res = CtcLossGrad(grid, CtcLattice({1}));
  // Valid paths aa, a-, -a out of 9, each 1/9.
  CHECK(res.loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(res.loss == doctest::Approx(1.0986).epsilon(1e-4));
  CHECK(BruteForceLoss(grid, {1}) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("loss+grad equals the brute-force oracle on a small sweep") {
  std::mt19937_64 rng(17);
  for (int v = 1; v <= 3; ++v) {
    for (int t = 1; t <= 4; ++t) {
      for (int trial = 0; trial < 5; ++trial) {
        PosteriorGrid grid = RandomGrid(rng, t, v + 1);
        std::vector<LabelSequence> labels = {{}, {1}};
        if (v >= 2) {
          labels.push_back({1, 2});
          labels.push_back({2, 2});
          labels.push_back({1, 2, 1});
        }
        for (const auto& l : labels) {
          double oracle = 0.0, fast = 0.0;
          std::string oracle_kind = ErrorKindOf(
              [&] { oracle = BruteForceLoss(grid, l); });
          std::string fast_kind = ErrorKindOf(
              [&] { fast = CtcLossGrad(grid, CtcLattice(l)).loss; });
          CHECK(oracle_kind == fast_kind);
          if (oracle_kind.empty()) {
            CHECK(fast == doctest::Approx(oracle).epsilon(1e-9));
          }
        }
      }
    }
  }
}

TEST_CASE("gradient rows sum to zero and occupancies to one") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    PosteriorGrid grid = RandomGrid(rng, 6, 4);
    CtcResult res = CtcLossGrad(grid, CtcLattice({1, 2, 2}));
    for (int t = 0; t < grid.num_frames(); ++t) {
      CHECK(std::abs(res.dloss_dlogits.row(t).sum()) < 1e-9);
      CHECK(std::abs(res.occupancy.row(t).sum() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("the frame marginal is constant across time in the log domain") {
  std::mt19937_64 rng(23);
  PosteriorGrid grid = RandomGrid(rng, 8, 4);
  CtcResult res = CtcLossGrad(grid, CtcLattice({2, 1}));
  for (int t = 0; t < grid.num_frames(); ++t) {
    CHECK(std::abs(std::log(res.occupancy.row(t).sum())) < 1e-9);
  }
}

TEST_CASE("gradients match finite differences through the softmax") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd logits(5, 4);
  for (int t = 0; t < 5; ++t) {
    for (int k = 0; k < 4; ++k) logits(t, k) = normal(rng);
  }
  LabelSequence labels{1, 3};
  CtcLattice lattice(labels);
  auto loss_of = [&](const Eigen::MatrixXd& l) {
    PosteriorGrid grid;
    grid.values = RowSoftmax(l);
    return CtcLossGrad(grid, lattice).loss;
  };
  PosteriorGrid grid;
  grid.values = RowSoftmax(logits);
  Eigen::MatrixXd grad = CtcLossGrad(grid, lattice).dloss_dlogits;
  const double h = 1e-6;
  for (int t = 0; t < 5; ++t) {
    for (int k = 0; k < 4; ++k) {
      Eigen::MatrixXd up = logits, down = logits;
      up(t, k) += h;
      down(t, k) -= h;
      double fd = (loss_of(up) - loss_of(down)) / (2 * h);
      double denom = std::max({std::abs(fd), std::abs(grad(t, k)), 1e-6});
      CHECK(std::abs(fd - grad(t, k)) / denom < 1e-4);
    }
  }
}

TEST_CASE("brute force guards its instance size") {
  PosteriorGrid grid = UniformGrid(13, 4);  // 4^13 > 1e7
  CHECK(ErrorKindOf([&] { BruteForceLoss(grid, {1}); }) == "TooLarge");
}

TEST_CASE("empty label sequence scores the all-blank path") {
  PosteriorGrid grid = GridFromRows({{0.7, 0.2, 0.1}});
  CHECK(BruteForceLoss(grid, {}) ==
        doctest::Approx(-std::log(0.7)).epsilon(1e-12));
  CHECK(CtcLossGrad(grid, CtcLattice({})).loss ==
        doctest::Approx(-std::log(0.7)).epsilon(1e-12));
}

TEST_CASE("best-path decoding collapses repeats and strips blanks") {
  // argmax path: - a a - b
  PosteriorGrid grid = GridFromRows({{0.8, 0.1, 0.1},
                                     {0.1, 0.8, 0.1},
                                     {0.2, 0.7, 0.1},
                                     {0.9, 0.05, 0.05},
                                     {0.1, 0.2, 0.7}});
  CHECK(BestPathDecode(grid) == LabelSequence{1, 2});

  PosteriorGrid blanks = GridFromRows({{0.9, 0.1}, {0.8, 0.2}});
  CHECK(BestPathDecode(blanks).empty());

  // a - a keeps both a's.
  PosteriorGrid again = GridFromRows({{0.1, 0.9}, {0.9, 0.1}, {0.2, 0.8}});
  CHECK(BestPathDecode(again) == LabelSequence{1, 1});
}

TEST_CASE("forced alignment basics and the earliest-emission tie-break") {
  PosteriorGrid one = GridFromRows({{0.4, 0.6}});
  ForcedAlignment a1 = ForcedAlign(one, CtcLattice({1}));
  CHECK(a1.states == std::vector<int>{1});
  CHECK(a1.frame_labels == std::vector<int>{1});

  // All paths tie on a uniform grid; the label must come first.
  PosteriorGrid uniform = UniformGrid(3, 3);
  ForcedAlignment a2 = ForcedAlign(uniform, CtcLattice({1}));
  CHECK(a2.frame_labels == std::vector<int>{1, 0, 0});
  CHECK(a2.states == std::vector<int>{1, 2, 2});
}

TEST_CASE("forced alignment probability matches brute-force enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    PosteriorGrid grid = RandomGrid(rng, 5, 4);
    for (const LabelSequence& labels :
         {LabelSequence{1}, LabelSequence{2, 1}, LabelSequence{3, 3}}) {
      ForcedAlignment fa = ForcedAlign(grid, CtcLattice(labels));
      CHECK(fa.log_prob ==
            doctest::Approx(BruteForceBestPathLogProb(grid, labels))
                .epsilon(1e-9));
      // The reconstructed path itself has the claimed probability.
      double lp = 0.0;
      for (int t = 0; t < grid.num_frames(); ++t) {
        lp += std::log(grid.values(t, fa.frame_labels[t]));
      }
      CHECK(lp == doctest::Approx(fa.log_prob).epsilon(1e-9));
      CHECK(CollapsePath(fa.frame_labels) == labels);
    }
  }
}

TEST_CASE("forced alignment reports NoAlignment when frames are scarce") {
  PosteriorGrid grid = UniformGrid(2, 3);
  CHECK(ErrorKindOf([&] { ForcedAlign(grid, CtcLattice({1, 1})); }) ==
        "NoAlignment");
  CHECK(ErrorKindOf([&] { ForcedAlign(grid, CtcLattice({1, 2, 1})); }) ==
        "NoAlignment");
}

TEST_CASE("occupancies export as a feature container payload") {
  PosteriorGrid grid = UniformGrid(4, 3);
  CtcResult res = CtcLossGrad(grid, CtcLattice({1}));
  FeatureSequence fs = OccupancyAsFeatures(res, 0.03);
  CHECK(fs.num_frames() == 4);
  CHECK(fs.dim() == 3);  // 2U+1
  CHECK(fs.frame_shift == 0.03);
}
