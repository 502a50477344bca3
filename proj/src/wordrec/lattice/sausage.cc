// wordrec/lattice/sausage.cc

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

#include "wordrec/lattice/sausage.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wordrec/common/error.h"

namespace wordrec {

namespace {

// Posteriors can be exactly zero in synthetic grids; keep arc weights finite.
double NegLog(double p) { return -std::log(std::max(p, 1e-300)); }

}  // namespace

Wfst BuildSausage(const PosteriorGrid& grid, int k, int vocab_size) {
  if (k < 1) throw Error("ConfigError", "sausage width k must be >= 1");
  if (grid.num_labels() != vocab_size + 1) {
    throw Error("ShapeError", "grid labels do not match vocab size");
  }
  const int blank_sym = BlankFrameSymbol(vocab_size);
  Wfst lat(Semiring::kTropical);
  for (int t = 0; t <= grid.num_frames(); ++t) lat.AddState();
  lat.SetStart(0);
  lat.SetFinal(grid.num_frames(), 0.0);

  std::vector<int> order(grid.num_labels());
  for (int t = 0; t < grid.num_frames(); ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (grid.values(t, a) != grid.values(t, b)) {
        return grid.values(t, a) > grid.values(t, b);
      }
      return a < b;
    });
    for (int rank = 0; rank < k && rank < grid.num_labels(); ++rank) {
      int label = order[rank];
      if (label == kBlankId) continue;  // the blank arc is always added
      lat.AddArc(t, {label, label, NegLog(grid.values(t, label)), t + 1});
    }
    lat.AddArc(t, {blank_sym, blank_sym, NegLog(grid.values(t, kBlankId)),
                   t + 1});
  }
  return lat;
}

Wfst BuildCollapseFst(int vocab_size) {
  if (vocab_size < 1) throw Error("ConfigError", "empty vocabulary");
  const int blank_sym = BlankFrameSymbol(vocab_size);
  Wfst r(Semiring::kTropical);
  int hub = r.AddState();  // state 0: nothing pending
  r.SetStart(hub);
  r.SetFinal(hub, 0.0);
  for (int w = 1; w <= vocab_size; ++w) {
    int s = r.AddState();  // state w: just emitted word w
    r.SetFinal(s, 0.0);
  }
  r.AddArc(hub, {blank_sym, kEpsilon, 0.0, hub});
  for (int w = 1; w <= vocab_size; ++w) {
    r.AddArc(hub, {w, w, 0.0, w});
    r.AddArc(w, {w, kEpsilon, 0.0, w});          // repeated frame, no output
    r.AddArc(w, {blank_sym, kEpsilon, 0.0, hub});
    for (int other = 1; other <= vocab_size; ++other) {
      if (other != w) r.AddArc(w, {other, other, 0.0, other});
    }
  }
  return r;
}

namespace {

// The chained compositions never introduce input-epsilon moves on the
// lattice side, so the epsilon-free input labels of any path are exactly the
// T frame symbols it consumed; that splits the combined weight back into
// acoustic and (scaled) LM parts.
double AcousticCostOf(const PosteriorGrid& grid,
                      const std::vector<int>& frame_symbols, int vocab_size) {
  if (static_cast<int>(frame_symbols.size()) != grid.num_frames()) {
    throw Error("ShapeError", "path does not cover every frame");
  }
  const int blank_sym = BlankFrameSymbol(vocab_size);
  double cost = 0.0;
  for (int t = 0; t < grid.num_frames(); ++t) {
    int label = frame_symbols[t] == blank_sym ? kBlankId : frame_symbols[t];
    cost += NegLog(grid.values(t, label));
  }
  return cost;
}

RescoreResult GreedyFallback(const PosteriorGrid& grid) {
  RescoreResult out;
  out.used_fallback = true;
  out.words = BestPathDecode(grid);
  for (int t = 0; t < grid.num_frames(); ++t) {
    out.acoustic_cost += NegLog(grid.values.row(t).maxCoeff());
  }
  return out;
}

RescoreResult RunChain(const PosteriorGrid& grid, const Wfst& machine,
                       int vocab_size, double lm_scale) {
  ShortestPathResult best;
  try {
    best = ShortestPath(machine);
  } catch (const Error& e) {
    if (e.kind() == "EmptyMachine") return GreedyFallback(grid);
    throw;
  }
  RescoreResult out;
  out.words = best.olabels;
  out.acoustic_cost = AcousticCostOf(grid, best.ilabels, vocab_size);
  out.lm_cost =
      lm_scale == 0.0 ? 0.0 : (best.weight - out.acoustic_cost) / lm_scale;
  return out;
}

}  // namespace

RescoreResult RescoreSpoken(const PosteriorGrid& grid, const Wfst& sausage,
                            const Wfst& collapse, const Wfst& verbalizer,
                            const Wfst& lm, double lm_scale) {
  const int vocab_size = grid.num_labels() - 1;
  Wfst words = Connect(Compose(sausage, collapse));
  Wfst written = Connect(Compose(words, Invert(verbalizer)));
  Wfst scored = Connect(Compose(written, ScaleWeights(lm, lm_scale)));
  return RunChain(grid, scored, vocab_size, lm_scale);
}

RescoreResult RescoreWritten(const PosteriorGrid& grid, const Wfst& sausage,
                             const Wfst& collapse, const Wfst& lm,
                             double lm_scale) {
  const int vocab_size = grid.num_labels() - 1;
  Wfst words = Connect(Compose(sausage, collapse));
  Wfst scored = Connect(Compose(words, ScaleWeights(lm, lm_scale)));
  return RunChain(grid, scored, vocab_size, lm_scale);
}

}  // namespace wordrec
