// wordrec/wfst/wfst.cc

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

#include "wordrec/wfst/wfst.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "wordrec/common/error.h"

namespace wordrec {

void Wfst::CheckState(int state) const {
  if (state < 0 || state >= NumStates()) {
    throw Error("StateError", "state " + std::to_string(state) +
                                  " out of range [0, " +
                                  std::to_string(NumStates()) + ")");
  }
}

void Wfst::AddArc(int src, const Arc& arc) {
  CheckState(src);
  CheckState(arc.dst);
  if (!std::isfinite(arc.weight)) {
    throw Error("WeightError", "arc weights must be finite");
  }
  arcs_[src].push_back(arc);
}

int Wfst::NumArcs() const {
  int n = 0;
  for (const auto& a : arcs_) n += static_cast<int>(a.size());
  return n;
}

bool Wfst::IsAcyclic() const {
  if (start_ < 0) return true;
  // Iterative DFS with colors: 0 unseen, 1 on stack, 2 done.
  std::vector<int> color(NumStates(), 0);
  std::vector<std::pair<int, std::size_t>> stack;
  stack.emplace_back(start_, 0);
  color[start_] = 1;
  while (!stack.empty()) {
    auto& [s, next] = stack.back();
    if (next < arcs_[s].size()) {
      int dst = arcs_[s][next++].dst;
      if (color[dst] == 1) return false;
      if (color[dst] == 0) {
        color[dst] = 1;
        stack.emplace_back(dst, 0);
      }
    } else {
      color[s] = 2;
      stack.pop_back();
    }
  }
  return true;
}

namespace {

Wfst EmptyLike(Semiring semiring) {
  Wfst m(semiring);
  m.SetStart(m.AddState());
  return m;
}

// States reachable from start along arcs.
std::vector<bool> ForwardReachable(const Wfst& a) {
  std::vector<bool> seen(a.NumStates(), false);
  if (a.Start() < 0) return seen;
  std::deque<int> queue{a.Start()};
  seen[a.Start()] = true;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (const Arc& arc : a.ArcsFrom(s)) {
      if (!seen[arc.dst]) {
        seen[arc.dst] = true;
        queue.push_back(arc.dst);
      }
    }
  }
  return seen;
}

// States from which some final state is reachable.
std::vector<bool> Coaccessible(const Wfst& a) {
  int n = a.NumStates();
  std::vector<std::vector<int>> rev(n);
  for (int s = 0; s < n; ++s) {
    for (const Arc& arc : a.ArcsFrom(s)) rev[arc.dst].push_back(s);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    if (a.IsFinal(s)) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int p : rev[s]) {
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  return seen;
}

}  // namespace

Wfst Compose(const Wfst& a, const Wfst& b) {
  if (a.semiring() != b.semiring()) {
    throw Error("SemiringError", "compose requires matching semirings");
  }
  Wfst out(a.semiring());
  if (a.Start() < 0 || b.Start() < 0 || a.NumStates() == 0 ||
      b.NumStates() == 0) {
    return EmptyLike(a.semiring());
  }

  // Composite state = (state in A, state in B, filter state).
  // Filter: 0 = free, 1 = only B may continue epsilon-advancing alone,
  // 2 = only A may. A real match resets to 0; a paired epsilon advance
  // (A epsilon-output with B epsilon-input in one step) is allowed from 0
  // only. This admits exactly one interleaving of the epsilon moves between
  // two matches, so no path pair is duplicated or lost.
  const std::int64_t nb = b.NumStates();
  auto key = [nb](int qa, int qb, int f) {
    return (static_cast<std::int64_t>(qa) * nb + qb) * 3 + f;
  };
  std::unordered_map<std::int64_t, int> ids;
  std::deque<std::tuple<int, int, int>> queue;

  auto state_of = [&](int qa, int qb, int f) {
    auto [it, inserted] = ids.try_emplace(key(qa, qb, f), -1);
    if (inserted) {
      it->second = out.AddState();
      queue.emplace_back(qa, qb, f);
      double fa = a.FinalWeight(qa);
      double fb = b.FinalWeight(qb);
      if (fa != kInfiniteWeight && fb != kInfiniteWeight) {
        out.SetFinal(it->second, fa + fb);
      }
    }
    return it->second;
  };

  out.SetStart(state_of(a.Start(), b.Start(), 0));
  while (!queue.empty()) {
    auto [qa, qb, f] = queue.front();
    queue.pop_front();
    int src = ids.at(key(qa, qb, f));
    for (const Arc& aa : a.ArcsFrom(qa)) {
      if (aa.olabel == kEpsilon) {
        // A advances alone.
        if (f == 0 || f == 2) {
          out.AddArc(src, {aa.ilabel, kEpsilon, aa.weight,
                           state_of(aa.dst, qb, 2)});
        }
        // Paired epsilon advance.
        if (f == 0) {
          for (const Arc& bb : b.ArcsFrom(qb)) {
            if (bb.ilabel == kEpsilon) {
              out.AddArc(src, {aa.ilabel, bb.olabel, aa.weight + bb.weight,
                               state_of(aa.dst, bb.dst, 0)});
            }
          }
        }
      } else {
        for (const Arc& bb : b.ArcsFrom(qb)) {
          if (bb.ilabel == aa.olabel) {
            out.AddArc(src, {aa.ilabel, bb.olabel, aa.weight + bb.weight,
                             state_of(aa.dst, bb.dst, 0)});
          }
        }
      }
    }
    if (f == 0 || f == 1) {
      // B advances alone.
      for (const Arc& bb : b.ArcsFrom(qb)) {
        if (bb.ilabel == kEpsilon) {
          out.AddArc(src, {kEpsilon, bb.olabel, bb.weight,
                           state_of(qa, bb.dst, 1)});
        }
      }
    }
  }
  return out;
}

Wfst Project(const Wfst& a, ProjectSide side) {
  Wfst out(a.semiring());
  for (int s = 0; s < a.NumStates(); ++s) out.AddState();
  if (a.Start() >= 0) out.SetStart(a.Start());
  for (int s = 0; s < a.NumStates(); ++s) {
    if (a.IsFinal(s)) out.SetFinal(s, a.FinalWeight(s));
    for (const Arc& arc : a.ArcsFrom(s)) {
      int label = side == ProjectSide::kInput ? arc.ilabel : arc.olabel;
      out.AddArc(s, {label, label, arc.weight, arc.dst});
    }
  }
  return out;
}

Wfst Invert(const Wfst& a) {
  Wfst out(a.semiring());
  for (int s = 0; s < a.NumStates(); ++s) out.AddState();
  if (a.Start() >= 0) out.SetStart(a.Start());
  for (int s = 0; s < a.NumStates(); ++s) {
    if (a.IsFinal(s)) out.SetFinal(s, a.FinalWeight(s));
    for (const Arc& arc : a.ArcsFrom(s)) {
      out.AddArc(s, {arc.olabel, arc.ilabel, arc.weight, arc.dst});
    }
  }
  return out;
}

Wfst Connect(const Wfst& a) {
  if (a.Start() < 0) return EmptyLike(a.semiring());
  std::vector<bool> fwd = ForwardReachable(a);
  std::vector<bool> bwd = Coaccessible(a);
  std::vector<int> remap(a.NumStates(), -1);
  Wfst out(a.semiring());
  for (int s = 0; s < a.NumStates(); ++s) {
    if (fwd[s] && bwd[s]) remap[s] = out.AddState();
  }
  if (remap[a.Start()] < 0) return EmptyLike(a.semiring());
  out.SetStart(remap[a.Start()]);
  for (int s = 0; s < a.NumStates(); ++s) {
    if (remap[s] < 0) continue;
    if (a.IsFinal(s)) out.SetFinal(remap[s], a.FinalWeight(s));
    for (const Arc& arc : a.ArcsFrom(s)) {
      if (remap[arc.dst] >= 0) {
        out.AddArc(remap[s], {arc.ilabel, arc.olabel, arc.weight,
                              remap[arc.dst]});
      }
    }
  }
  return out;
}

Wfst ScaleWeights(const Wfst& a, double factor) {
  Wfst out(a.semiring());
  for (int s = 0; s < a.NumStates(); ++s) out.AddState();
  if (a.Start() >= 0) out.SetStart(a.Start());
  for (int s = 0; s < a.NumStates(); ++s) {
    if (a.IsFinal(s)) out.SetFinal(s, a.FinalWeight(s) * factor);
    for (const Arc& arc : a.ArcsFrom(s)) {
      out.AddArc(s, {arc.ilabel, arc.olabel, arc.weight * factor, arc.dst});
    }
  }
  return out;
}

namespace {

// Reverse topological order of the states reachable from start; empty result
// signals a reachable cycle.
std::vector<int> ReverseTopoOrder(const Wfst& a) {
  std::vector<int> order;
  if (a.Start() < 0) return order;
  std::vector<int> color(a.NumStates(), 0);
  std::vector<std::pair<int, std::size_t>> stack;
  stack.emplace_back(a.Start(), 0);
  color[a.Start()] = 1;
  while (!stack.empty()) {
    auto& [s, next] = stack.back();
    if (next < a.ArcsFrom(s).size()) {
      int dst = a.ArcsFrom(s)[next++].dst;
      if (color[dst] == 1) return {};  // cycle
      if (color[dst] == 0) {
        color[dst] = 1;
        stack.emplace_back(dst, 0);
      }
    } else {
      color[s] = 2;
      order.push_back(s);
      stack.pop_back();
    }
  }
  return order;
}

struct SuffixBest {
  double weight = kInfiniteWeight;
  std::vector<int> olabels;  // epsilon-free suffix under the tie-break
  int arc_index = -1;        // -1: stop here (final); else index into arcs
};

ShortestPathResult AcyclicShortest(const Wfst& a,
                                   const std::vector<int>& rev_topo) {
  std::vector<SuffixBest> best(a.NumStates());
  for (int s : rev_topo) {
    SuffixBest b;
    if (a.IsFinal(s)) {
      b.weight = a.FinalWeight(s);
      b.arc_index = -1;
    }
    const auto& arcs = a.ArcsFrom(s);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const SuffixBest& tail = best[arcs[i].dst];
      if (tail.weight == kInfiniteWeight) continue;
      double w = arcs[i].weight + tail.weight;
      if (w > b.weight) continue;
      std::vector<int> labels;
      labels.reserve(tail.olabels.size() + 1);
      if (arcs[i].olabel != kEpsilon) labels.push_back(arcs[i].olabel);
      labels.insert(labels.end(), tail.olabels.begin(), tail.olabels.end());
      if (w < b.weight ||
          std::lexicographical_compare(labels.begin(), labels.end(),
                                       b.olabels.begin(), b.olabels.end())) {
        b.weight = w;
        b.olabels = std::move(labels);
        b.arc_index = static_cast<int>(i);
      }
    }
    best[s] = std::move(b);
  }

  if (best[a.Start()].weight == kInfiniteWeight) {
    throw Error("EmptyMachine", "no accepting path");
  }
  ShortestPathResult result;
  result.weight = best[a.Start()].weight;
  int s = a.Start();
  while (best[s].arc_index >= 0) {
    const Arc& arc = a.ArcsFrom(s)[best[s].arc_index];
    if (arc.ilabel != kEpsilon) result.ilabels.push_back(arc.ilabel);
    if (arc.olabel != kEpsilon) result.olabels.push_back(arc.olabel);
    s = arc.dst;
  }
  return result;
}

// Bellman-Ford fallback for cyclic machines. Deterministic but without the
// lexicographic guarantee.
ShortestPathResult CyclicShortest(const Wfst& a) {
  int n = a.NumStates();
  std::vector<double> dist(n, kInfiniteWeight);
  std::vector<std::pair<int, int>> parent(n, {-1, -1});  // (state, arc idx)
  dist[a.Start()] = 0.0;
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (int s = 0; s < n; ++s) {
      if (dist[s] == kInfiniteWeight) continue;
      const auto& arcs = a.ArcsFrom(s);
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        double w = dist[s] + arcs[i].weight;
        if (w < dist[arcs[i].dst]) {
          dist[arcs[i].dst] = w;
          parent[arcs[i].dst] = {s, static_cast<int>(i)};
          changed = true;
          if (pass == n - 1) {
            throw Error("WeightError", "negative cycle in shortest path");
          }
        }
      }
    }
    if (!changed) break;
  }
  int best_state = -1;
  double best = kInfiniteWeight;
  for (int s = 0; s < n; ++s) {
    if (!a.IsFinal(s) || dist[s] == kInfiniteWeight) continue;
    double w = dist[s] + a.FinalWeight(s);
    if (w < best) {
      best = w;
      best_state = s;
    }
  }
  if (best_state < 0) throw Error("EmptyMachine", "no accepting path");

  std::vector<std::pair<int, int>> rev_arcs;
  for (int s = best_state; parent[s].first >= 0;) {
    rev_arcs.push_back(parent[s]);
    s = parent[s].first;
  }
  ShortestPathResult result;
  result.weight = best;
  for (auto it = rev_arcs.rbegin(); it != rev_arcs.rend(); ++it) {
    const Arc& arc = a.ArcsFrom(it->first)[it->second];
    if (arc.ilabel != kEpsilon) result.ilabels.push_back(arc.ilabel);
    if (arc.olabel != kEpsilon) result.olabels.push_back(arc.olabel);
  }
  return result;
}

}  // namespace

ShortestPathResult ShortestPath(const Wfst& a) {
  if (a.semiring() != Semiring::kTropical) {
    throw Error("SemiringError", "shortest path requires tropical weights");
  }
  if (a.Start() < 0 || a.NumStates() == 0) {
    throw Error("EmptyMachine", "machine has no start state");
  }
  std::vector<int> rev_topo = ReverseTopoOrder(a);
  if (!rev_topo.empty()) return AcyclicShortest(a, rev_topo);
  return CyclicShortest(a);
}

std::vector<EnumeratedPath> EnumeratePaths(const Wfst& a,
                                           std::size_t max_paths) {
  std::vector<EnumeratedPath> paths;
  if (a.Start() < 0) return paths;
  if (!a.IsAcyclic()) {
    throw Error("CyclicMachine", "path enumeration requires an acyclic machine");
  }
  EnumeratedPath current;
  std::function<void(int)> visit = [&](int s) {
    if (a.IsFinal(s)) {
      if (paths.size() >= max_paths) {
        throw Error("TooLarge", "too many paths to enumerate");
      }
      EnumeratedPath done = current;
      done.weight += a.FinalWeight(s);
      paths.push_back(std::move(done));
    }
    for (const Arc& arc : a.ArcsFrom(s)) {
      EnumeratedPath saved = current;
      if (arc.ilabel != kEpsilon) current.ilabels.push_back(arc.ilabel);
      if (arc.olabel != kEpsilon) current.olabels.push_back(arc.olabel);
      current.weight += arc.weight;
      visit(arc.dst);
      current = std::move(saved);
    }
  };
  visit(a.Start());
  return paths;
}

namespace {

std::string FormatWeight(double w) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  (void)ec;
  return std::string(buf, ptr);
}

double ParseWeight(const std::string& field) {
  try {
    return std::stod(field);
  } catch (const std::exception&) {
    throw Error("FormatError", "bad weight field '" + field + "'");
  }
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

}  // namespace

void WriteFstText(const Wfst& a, std::ostream& os) {
  if (a.Start() < 0) return;
  auto write_arcs = [&](int s) {
    for (const Arc& arc : a.ArcsFrom(s)) {
      os << s << '\t' << arc.dst << '\t' << arc.ilabel << '\t' << arc.olabel
         << '\t' << FormatWeight(arc.weight) << '\n';
    }
  };
  bool start_headless =
      a.ArcsFrom(a.Start()).empty() && !a.IsFinal(a.Start());
  if (start_headless) os << a.Start() << '\n';
  if (a.IsFinal(a.Start()) && a.ArcsFrom(a.Start()).empty()) {
    os << a.Start() << '\t' << FormatWeight(a.FinalWeight(a.Start())) << '\n';
  }
  write_arcs(a.Start());
  for (int s = 0; s < a.NumStates(); ++s) {
    if (s != a.Start()) write_arcs(s);
  }
  for (int s = 0; s < a.NumStates(); ++s) {
    if (!a.IsFinal(s)) continue;
    if (s == a.Start() && a.ArcsFrom(a.Start()).empty()) continue;  // written
    os << s << '\t' << FormatWeight(a.FinalWeight(s)) << '\n';
  }
}

Wfst ReadFstText(std::istream& is, Semiring semiring) {
  Wfst out(semiring);
  auto ensure_state = [&](int s) {
    if (s < 0) throw Error("FormatError", "negative state id");
    while (out.NumStates() <= s) out.AddState();
  };
  std::string line;
  bool first = true;
  std::vector<std::tuple<int, Arc>> arcs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = SplitTabs(line);
    int src = -1;
    try {
      src = std::stoi(f[0]);
    } catch (const std::exception&) {
      throw Error("FormatError", "bad state field '" + f[0] + "'");
    }
    ensure_state(src);
    if (first) {
      out.SetStart(src);
      first = false;
    }
    if (f.size() == 5) {
      int dst = std::stoi(f[1]);
      ensure_state(dst);
      arcs.emplace_back(src, Arc{std::stoi(f[2]), std::stoi(f[3]),
                                 ParseWeight(f[4]), dst});
    } else if (f.size() == 2) {
      out.SetFinal(src, ParseWeight(f[1]));
    } else if (f.size() != 1) {
      throw Error("FormatError", "expected 1, 2 or 5 tab-separated fields");
    }
  }
  for (const auto& [src, arc] : arcs) out.AddArc(src, arc);
  if (out.Start() < 0) {
    throw Error("FormatError", "empty machine file");
  }
  return out;
}

void WriteFstFile(const Wfst& a, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  WriteFstText(a, os);
  if (!os) throw Error("IoError", "write failed: " + path);
}

Wfst ReadFstFile(const std::string& path, Semiring semiring) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  return ReadFstText(is, semiring);
}

}  // namespace wordrec
