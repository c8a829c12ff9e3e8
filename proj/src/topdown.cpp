#include "dccs/topdown.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include <spdlog/spdlog.h>

#include "search_common.hpp"

namespace dccs {

namespace {

constexpr std::uint32_t kAbsent = static_cast<std::uint32_t>(-1);

}  // namespace

// ---------------------------------------------------------------------------
// Index

CoreIndex build_core_index(const MultiLayerGraph& g, int d) {
  const std::size_t n = g.num_vertices();
  const int l = g.num_layers();
  const auto cap = static_cast<std::uint32_t>(std::max(d, 0));
  SupportTable st = support_table(g, d);
  std::vector<std::uint64_t> mask = st.core_mask;

  // cdeg[v*l + i]: neighbors of v inside the current d-core of layer i.
  std::vector<std::uint32_t> cdeg(n * static_cast<std::size_t>(l), 0);
  for (VertexId v = 0; v < n; ++v) {
    auto nb = g.union_neighbors(v);
    auto masks = g.union_masks(v);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      for (std::uint64_t b = masks[e] & mask[v] & mask[nb[e]]; b != 0; b &= b - 1) {
        ++cdeg[v * l + std::countr_zero(b)];
      }
    }
  }

  std::vector<char> alive(n, 1);
  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t epoch = 0;
  std::vector<VertexId> changed;
  std::vector<std::pair<VertexId, int>> stack;

  // Removes x from the d-core of layer i and cascades the loss through that core.
  auto leave = [&](VertexId x, int i) {
    mask[x] &= ~(std::uint64_t{1} << i);
    stack.emplace_back(x, i);
    while (!stack.empty()) {
      auto [y, layer] = stack.back();
      stack.pop_back();
      if (alive[y] && seen[y] != epoch) {
        seen[y] = epoch;
        changed.push_back(y);
      }
      auto nb = g.union_neighbors(y);
      auto masks = g.union_masks(y);
      const std::uint64_t bit = std::uint64_t{1} << layer;
      for (std::size_t e = 0; e < nb.size(); ++e) {
        VertexId u = nb[e];
        if (!(masks[e] & bit) || !(mask[u] & bit)) continue;
        if (--cdeg[u * l + layer] < cap) {
          mask[u] &= ~bit;
          stack.emplace_back(u, layer);
        }
      }
    }
  };

  CoreIndex index;
  index.d = d;
  index.cls.assign(n, 0);
  index.level.assign(n, 0);
  index.label.assign(n, 0);
  std::uint32_t level_id = 0;
  for (int h = 1; h <= l; ++h) {
    std::vector<VertexId> batch;
    for (VertexId v = 0; v < n; ++v) {
      if (alive[v] && std::popcount(mask[v]) <= h) batch.push_back(v);
    }
    while (!batch.empty()) {
      for (VertexId v : batch) {
        index.cls[v] = h;
        index.level[v] = level_id;
        index.label[v] = mask[v];
      }
      ++epoch;
      changed.clear();
      for (VertexId v : batch) alive[v] = 0;
      for (VertexId v : batch) {
        while (mask[v] != 0) leave(v, std::countr_zero(mask[v]));
      }
      index.levels.push_back(std::move(batch));
      index.level_class.push_back(h);
      batch.clear();
      for (VertexId u : changed) {
        if (alive[u] && std::popcount(mask[u]) <= h) batch.push_back(u);
      }
      std::sort(batch.begin(), batch.end());
      ++level_id;
    }
  }

  index.up.resize(l);
  for (int i = 0; i < l; ++i) {
    CoreIndex::Up& up = index.up[i];
    up.offsets.assign(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) {
      for (VertexId u : g.neighbors(i, v)) {
        if (index.level[u] > index.level[v]) up.adj.push_back(u);
      }
      up.offsets[v + 1] = up.adj.size();
    }
  }
  return index;
}

// ---------------------------------------------------------------------------
// Potential sets

LayerSplit split_layers(LayerSet layers, int num_layers) {
  const int pivot = (LayerSet::all(num_layers) - layers).max();
  LayerSplit out;
  out.committed = layers & LayerSet::all(std::max(pivot, 0));
  out.removable = layers - out.committed;
  return out;
}

VertexSet refine_u(const MultiLayerGraph& g, int d, int s, std::span<const VertexId> parent, LayerSet layers,
                   PeelWorkspace* ws) {
  PeelWorkspace local;
  PeelWorkspace& w = ws ? *ws : local;
  const LayerSplit split = split_layers(layers, g.num_layers());
  const int need = s - split.committed.size();
  VertexSet u(parent.begin(), parent.end());
  std::vector<std::uint8_t> hits;
  for (;;) {
    const std::size_t before = u.size();
    if (!split.committed.empty()) u = w.peel(g, split.committed, d, u);
    if (need > 0) {
      hits.assign(u.size(), 0);
      for (int j : split.removable.ids()) {
        VertexSet core = w.peel(g, LayerSet{j}, d, u);
        std::size_t a = 0;
        for (VertexId v : core) {
          while (u[a] != v) ++a;
          ++hits[a];
        }
      }
      VertexSet kept;
      kept.reserve(u.size());
      for (std::size_t a = 0; a < u.size(); ++a) {
        if (hits[a] >= need) kept.push_back(u[a]);
      }
      u = std::move(kept);
    }
    if (u.size() == before) break;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Core refinement

VertexSet refine_c(const MultiLayerGraph& g, const CoreIndex& index, int d, std::span<const VertexId> potential,
                   LayerSet layers, RefineStats* stats) {
  RefineStats local_stats;
  RefineStats& st = stats ? *stats : local_stats;
  st = {};
  const int h = layers.size();
  VertexSet z;
  z.reserve(potential.size());
  for (VertexId v : potential) {
    if (index.cls[v] >= h) z.push_back(v);
  }
  st.scope = z.size();
  if (layers.empty() || z.empty()) return z;

  thread_local std::vector<std::uint32_t> local;
  if (local.size() < g.num_vertices()) local.resize(g.num_vertices(), kAbsent);
  const auto cnt = static_cast<std::uint32_t>(z.size());
  for (std::uint32_t a = 0; a < cnt; ++a) local[z[a]] = a;
  const std::vector<int> ids = layers.ids();
  const auto nl = static_cast<std::uint32_t>(ids.size());
  const auto cap = static_cast<std::uint32_t>(std::max(d, 0));

  enum : std::uint8_t { kUnexplored, kUndetermined, kDiscarded };
  std::vector<std::uint8_t> state(cnt, kUnexplored);
  std::vector<std::uint32_t> dplus(static_cast<std::size_t>(cnt) * nl, 0);

  for (std::uint32_t a = 0; a < cnt; ++a) {
    VertexId v = z[a];
    for (std::uint32_t t = 0; t < nl; ++t) {
      auto nb = g.neighbors(ids[t], v);
      st.scanned += nb.size();
      for (VertexId u : nb) {
        if (u <= v) continue;
        std::uint32_t b = local[u];
        if (b == kAbsent) continue;
        ++dplus[a * nl + t];
        ++dplus[b * nl + t];
        ++st.touches;
      }
    }
  }

  std::vector<std::uint32_t> order(cnt);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return index.level[z[a]] < index.level[z[b]]; });

  // Non-discarded vertices on levels already swept.
  std::size_t live_below = 0;
  std::uint32_t current = 0;
  std::vector<std::uint32_t> stack;

  auto below_d = [&](std::uint32_t a) {
    for (std::uint32_t t = 0; t < nl; ++t) {
      if (dplus[a * nl + t] < cap) return true;
    }
    return false;
  };

  auto discard = [&](std::uint32_t a0) {
    state[a0] = kDiscarded;
    if (index.level[z[a0]] < current) --live_below;
    stack.push_back(a0);
    while (!stack.empty()) {
      std::uint32_t a = stack.back();
      stack.pop_back();
      for (std::uint32_t t = 0; t < nl; ++t) {
        auto nb = g.neighbors(ids[t], z[a]);
        st.scanned += nb.size();
        for (VertexId u : nb) {
          std::uint32_t b = local[u];
          if (b == kAbsent || state[b] == kDiscarded) continue;
          ++st.touches;
          if (--dplus[b * nl + t] < cap && state[b] == kUndetermined) {
            state[b] = kDiscarded;
            if (index.level[u] < current) --live_below;
            stack.push_back(b);
          }
        }
      }
    }
  };

  for (std::size_t pos = 0; pos < cnt;) {
    current = index.level[z[order[pos]]];
    std::size_t end = pos;
    while (end < cnt && index.level[z[order[end]]] == current) ++end;

    // With nothing left below, any core member on this level sat in the d-cores of all of L
    // when its batch was removed.
    if (live_below == 0) {
      for (std::size_t q = pos; q < end; ++q) {
        std::uint32_t a = order[q];
        if (state[a] != kDiscarded && !layers.subset_of(LayerSet(index.label[z[a]]))) discard(a);
      }
    }
    for (std::size_t q = pos; q < end; ++q) {
      std::uint32_t a = order[q];
      if (state[a] == kDiscarded) continue;
      if (below_d(a)) {
        discard(a);
        continue;
      }
      state[a] = kUndetermined;
      for (std::uint32_t t = 0; t < nl; ++t) {
        auto up = index.up_neighbors(ids[t], z[a]);
        st.scanned += up.size();
        for (VertexId u : up) {
          std::uint32_t b = local[u];
          if (b == kAbsent) continue;
          ++st.touches;
          if (state[b] == kUnexplored) state[b] = kUndetermined;
        }
      }
    }
    for (std::size_t q = pos; q < end; ++q) live_below += state[order[q]] != kDiscarded;
    pos = end;
  }

  VertexSet out;
  for (std::uint32_t a = 0; a < cnt; ++a) {
    if (state[a] != kDiscarded) out.push_back(z[a]);
    local[z[a]] = kAbsent;
  }
  return out;
}

std::uint64_t layer_edges_within(const MultiLayerGraph& g, std::span<const VertexId> u, LayerSet layers) {
  std::uint64_t m = 0;
  for (int i : layers.ids()) {
    for (VertexId v : u) {
      for (VertexId w : g.neighbors(i, v)) {
        if (w > v && std::binary_search(u.begin(), u.end(), w)) ++m;
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Search

namespace {

class TopDown {
 public:
  TopDown(const MultiLayerGraph& g, const CoreIndex& index, const std::vector<int>& order, const SearchParams& params,
          const SearchOptions& options, ResultSet& r, SearchStats& stats)
      : g_(g), index_(index), order_(order), p_(params), opt_(options), r_(r), stats_(stats), rng_(params.seed) {}

  void run() {
    const LayerSet all = LayerSet::all(g_.num_layers());
    if (p_.s == g_.num_layers()) {
      ++stats_.dcc_calls;
      update(dcc(g_, all, p_.d, &ws_), all);
      return;
    }
    VertexSet v(g_.num_vertices());
    std::iota(v.begin(), v.end(), VertexId{0});
    gen(all, v);
  }

 private:
  struct Child {
    int j;
    LayerSet layers;
    VertexSet potential;
  };

  bool dead(LayerSet layers) const {
    return layers.size() > p_.s &&
           split_layers(layers, g_.num_layers()).removable.size() < layers.size() - p_.s;
  }

  VertexSet potential(std::span<const VertexId> parent, LayerSet layers) {
    ++stats_.refine_u_calls;
    VertexSet u = refine_u(g_, p_.d, p_.s, parent, layers, &ws_);
    if (opt_.audit) audit_potential(parent, u, layers);
    return u;
  }

  VertexSet core(const Child& c) {
    ++stats_.refine_c_calls;
    ++stats_.dcc_calls;
    RefineStats rs;
    VertexSet out = refine_c(g_, index_, p_.d, c.potential, c.layers, &rs);
    stats_.refine_c_touches += rs.touches;
    if (opt_.audit) audit_core(c, out, rs);
    return out;
  }

  void update(VertexSet core, LayerSet layers) {
    ++stats_.candidates;
    stats_.record(r_.try_update({std::move(core), relabel(layers, order_)}));
  }

  void gen(LayerSet layers, const VertexSet& u) {
    ++stats_.nodes;
    const int pivot = (LayerSet::all(g_.num_layers()) - layers).max();
    const LayerSet removable = layers - LayerSet::all(pivot + 1);

    std::vector<Child> children;
    for (int j : removable.ids()) {
      LayerSet child = layers.without(j);
      if (dead(child)) continue;
      children.push_back({j, child, potential(u, child)});
    }

    if (!r_.full()) {
      for (Child& c : children) {
        if (c.layers.size() == p_.s) {
          update(core(c), c.layers);
        } else {
          gen(c.layers, c.potential);
        }
      }
      return;
    }

    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.potential.size() > b.potential.size(); });
    for (std::size_t idx = 0; idx < children.size(); ++idx) {
      Child& c = children[idx];
      if (opt_.prune_td_order && r_.below_size_bound(c.potential.size())) {
        stats_.pruned_td_order += children.size() - idx;
        if (opt_.audit) {
          for (std::size_t rest = idx; rest < children.size(); ++rest) {
            audit_descendants_fail(children[rest].layers, "order bound");
          }
        }
        break;
      }
      if (c.layers.size() == p_.s) {
        update(core(c), c.layers);
        continue;
      }
      if (opt_.prune_td_potential && !r_.improves(c.potential)) {
        ++stats_.pruned_td_potential;
        if (opt_.audit) audit_descendants_fail(c.layers, "potential set pruning");
        continue;
      }
      if (opt_.prune_td_single && r_.below_single_update_bound(c.potential.size())) {
        VertexSet own = core(c);
        if (r_.improves(own)) {
          single_update(c);
          continue;
        }
      }
      gen(c.layers, c.potential);
    }
  }

  // Replaces the whole subtree below c with one update.
  void single_update(const Child& c) {
    ++stats_.single_updates;
    LayerSet target;
    VertexSet target_u;
    if (opt_.descendant == DescendantPolicy::kFirst) {
      target = c.layers;
      target_u = c.potential;
      while (target.size() > p_.s) {
        const int pivot = (LayerSet::all(g_.num_layers()) - target).max();
        LayerSet best;
        VertexSet best_u;
        bool found = false;
        for (int j : (target - LayerSet::all(pivot + 1)).ids()) {
          LayerSet next = target.without(j);
          if (dead(next)) continue;
          VertexSet nu = potential(target_u, next);
          if (!found || nu.size() > best_u.size()) {
            best = next;
            best_u = std::move(nu);
            found = true;
          }
        }
        target = best;
        target_u = std::move(best_u);
      }
    } else {
      std::vector<int> pool = split_layers(c.layers, g_.num_layers()).removable.ids();
      std::shuffle(pool.begin(), pool.end(), rng_);
      target = c.layers;
      for (int i = 0; i < c.layers.size() - p_.s; ++i) target = target.without(pool[i]);
      target_u = c.potential;
    }
    ++stats_.dcc_calls;
    VertexSet chosen = dcc_bounded(g_, target, p_.d, target_u, &ws_);
    update(std::move(chosen), target);
    if (opt_.audit) audit_descendants_fail(c.layers, "single update", target);
  }

  // Calls fn(S) for every size-s descendant S of a node.
  template <typename Fn>
  void for_each_descendant(LayerSet layers, Fn&& fn) {
    const LayerSet removable = split_layers(layers, g_.num_layers()).removable;
    for_each_extension(removable, layers.size() - p_.s, [&](LayerSet drop) { fn(layers - drop); });
  }

  void audit_descendants_fail(LayerSet layers, const char* rule, std::optional<LayerSet> except = std::nullopt) {
    for_each_descendant(layers, [&](LayerSet s) {
      if (except && s == *except) return;
      ++stats_.audit_checks;
      if (r_.improves(dcc(g_, s, p_.d, &audit_ws_))) {
        stats_.violation(std::string(rule) + ": descendant " + relabel(s, order_).to_string() +
                         " of " + relabel(layers, order_).to_string() + " could still improve R");
      }
    });
  }

  void audit_potential(std::span<const VertexId> parent, const VertexSet& u, LayerSet layers) {
    ++stats_.audit_checks;
    if (!std::includes(parent.begin(), parent.end(), u.begin(), u.end())) {
      stats_.violation("potential set of " + relabel(layers, order_).to_string() + " grew");
    }
    VertexSet own = dcc(g_, layers, p_.d, &audit_ws_);
    if (!std::includes(u.begin(), u.end(), own.begin(), own.end())) {
      stats_.violation("potential set of " + relabel(layers, order_).to_string() + " misses its own core");
    }
    if (!dead(layers)) {
      for_each_descendant(layers, [&](LayerSet s) {
        VertexSet c = dcc(g_, s, p_.d, &audit_ws_);
        if (!std::includes(u.begin(), u.end(), c.begin(), c.end())) {
          stats_.violation("potential set of " + relabel(layers, order_).to_string() + " misses descendant " +
                           relabel(s, order_).to_string());
        }
      });
    }
  }

  void audit_core(const Child& c, const VertexSet& got, const RefineStats& rs) {
    ++stats_.audit_checks;
    VertexSet want = dcc(g_, c.layers, p_.d, &audit_ws_);
    if (got != want) stats_.violation("refined core of " + relabel(c.layers, order_).to_string() + " differs");
    for (VertexId v : want) {
      if (index_.cls[v] < c.layers.size()) {
        stats_.violation("core vertex below the index class bound for " + relabel(c.layers, order_).to_string());
        break;
      }
    }
    std::uint64_t m = layer_edges_within(g_, c.potential, c.layers);
    if (rs.touches > 3 * m) {
      stats_.violation("refinement touched " + std::to_string(rs.touches) + " entries for m'=" + std::to_string(m));
    }
  }

  const MultiLayerGraph& g_;
  const CoreIndex& index_;
  const std::vector<int>& order_;
  const SearchParams& p_;
  const SearchOptions& opt_;
  ResultSet& r_;
  SearchStats& stats_;
  std::mt19937_64 rng_;
  PeelWorkspace ws_;
  PeelWorkspace audit_ws_;
};

}  // namespace

SearchResult td_dccs(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options) {
  SearchStats stats;
  Preprocessed pre = prepare(g, params, options, stats);
  if (2 * params.s < g.num_layers()) {
    spdlog::warn("top-down search with s={} < l/2 (l={}); bottom-up is usually faster here", params.s,
                 g.num_layers());
  }
  ResultSet r = seed_results(pre, params, options, stats);

  std::vector<int> order(pre.graph.num_layers());
  std::iota(order.begin(), order.end(), 0);
  if (options.sort_layers) order = sort_layers(pre.support, SortDirection::kAscending);
  MultiLayerGraph sorted = pre.graph.with_layer_order(order);
  CoreIndex index = build_core_index(sorted, params.d);

  TopDown search(sorted, index, order, params, options, r, stats);
  search.run();
  return finish(r, pre, std::move(stats));
}

}  // namespace dccs
