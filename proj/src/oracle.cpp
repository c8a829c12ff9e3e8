#include "dccs/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace dccs::oracle {

namespace {

double choose(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// Calls fn with every ascending index combination of size r from 0..n-1, in lexicographic order.
void for_each_combination(int n, int r, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == r) {
      fn(cur);
      return;
    }
    for (int i = start; i <= n - (r - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

VertexSet naive_dcc(const MultiLayerGraph& g, LayerSet layers, int d, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<bool> alive(n, true);
  const std::vector<int> ids = layers.ids();
  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId v : order) {
      if (!alive[v]) continue;
      for (int i : ids) {
        int live = 0;
        for (VertexId u : g.neighbors(i, v)) live += alive[u] ? 1 : 0;
        if (live < d) {
          alive[v] = false;
          changed = true;
          break;
        }
      }
    }
  }
  VertexSet out;
  for (VertexId v = 0; v < n; ++v) {
    if (alive[v]) out.push_back(v);
  }
  return out;
}

std::size_t union_size(std::span<const VertexSet> sets) {
  std::set<VertexId> all;
  for (const VertexSet& s : sets) all.insert(s.begin(), s.end());
  return all.size();
}

ExactResult exact_dccs(const MultiLayerGraph& g, int d, int s, int k, double limit) {
  const int l = g.num_layers();
  if (s < 1 || s > l) throw Error("s must be in 1..l");
  if (k < 1) throw Error("k must be at least 1");
  const double f = choose(l, s);
  if (f > limit) throw TooLarge("C(l,s) alone exceeds the enumeration limit");
  const int take = static_cast<int>(std::min<double>(k, f));
  if (f * choose(static_cast<int>(f), take) > limit) {
    throw TooLarge("C(l,s) * C(|F|,k) exceeds the enumeration limit");
  }

  ExactResult out;
  for_each_combination(l, s, [&](const std::vector<int>& pick) {
    LayerSet layers;
    for (int i : pick) layers = layers.with(i);
    out.candidates.push_back({naive_dcc(g, layers, d), layers});
  });

  std::vector<int> best;
  std::size_t best_cover = 0;
  bool first = true;
  std::vector<VertexSet> sets;
  for_each_combination(static_cast<int>(out.candidates.size()), take, [&](const std::vector<int>& pick) {
    sets.clear();
    for (int i : pick) sets.push_back(out.candidates[i].vertices);
    std::size_t c = union_size(sets);
    if (first || c > best_cover) {
      best = pick;
      best_cover = c;
      first = false;
    }
  });
  out.opt = best_cover;
  for (int i : best) {
    if (!out.candidates[i].vertices.empty()) out.cores.push_back(out.candidates[i]);
  }
  return out;
}

CoreReport verify_core(const MultiLayerGraph& g, const CoherentCore& core, int d) {
  CoreReport report;
  std::set<VertexId> members(core.vertices.begin(), core.vertices.end());
  for (int i : core.layers.ids()) {
    if (i >= g.num_layers()) {
      report.dense = false;
      report.detail = "layer " + std::to_string(i + 1) + " does not exist";
      return report;
    }
    for (VertexId v : core.vertices) {
      int inside = 0;
      for (VertexId u : g.neighbors(i, v)) inside += members.count(u) ? 1 : 0;
      if (inside < d) {
        report.dense = false;
        report.detail = "vertex " + g.external_id(v) + " has " + std::to_string(inside) + " neighbors on layer " +
                        std::to_string(i + 1);
        return report;
      }
    }
  }
  VertexSet full = naive_dcc(g, core.layers, d);
  if (full != core.vertices) {
    report.maximal = false;
    report.detail = "set has " + std::to_string(core.vertices.size()) + " vertices but the maximal core has " +
                    std::to_string(full.size());
  }
  return report;
}

std::size_t greedy_cover(std::span<const VertexSet> sets, int k) {
  std::set<VertexId> covered;
  std::vector<bool> used(sets.size(), false);
  for (int round = 0; round < k; ++round) {
    int best = -1;
    std::size_t gain_best = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (used[i]) continue;
      std::size_t gain = 0;
      for (VertexId v : sets[i]) gain += covered.count(v) ? 0 : 1;
      if (best < 0 || gain > gain_best) {
        best = static_cast<int>(i);
        gain_best = gain;
      }
    }
    if (best < 0) break;
    used[best] = true;
    covered.insert(sets[best].begin(), sets[best].end());
  }
  return covered.size();
}

}  // namespace dccs::oracle
