#include "dccs/bottomup.hpp"

#include <algorithm>
#include <numeric>

#include "search_common.hpp"

namespace dccs {

namespace {

class BottomUp {
 public:
  BottomUp(const MultiLayerGraph& g, const SupportTable& support, const std::vector<int>& order,
           const SearchParams& params, const SearchOptions& options, ResultSet& r, SearchStats& stats)
      : g_(g), support_(support), order_(order), p_(params), opt_(options), r_(r), stats_(stats) {}

  void run() {
    VertexSet all(g_.num_vertices());
    std::iota(all.begin(), all.end(), VertexId{0});
    gen(LayerSet{}, all, LayerSet{});
  }

 private:
  struct Child {
    int j;
    VertexSet core;
  };

  LayerSet above(int j) const { return LayerSet::all(g_.num_layers()) - LayerSet::all(j + 1); }

  VertexSet child_core(const VertexSet& core, LayerSet child, int j) {
    VertexSet seed;
    for (VertexId v : core) {
      if (support_.in_core(j, v)) seed.push_back(v);
    }
    ++stats_.dcc_calls;
    return dcc_bounded(g_, child, p_.d, seed, &ws_);
  }

  void update(VertexSet core, LayerSet layers) {
    ++stats_.candidates;
    stats_.record(r_.try_update({std::move(core), relabel(layers, order_)}));
  }

  void gen(LayerSet layers, const VertexSet& core, LayerSet forbidden) {
    ++stats_.nodes;
    const LayerSet expandable = above(layers.max()) - forbidden;
    const int child_size = layers.size() + 1;
    if (opt_.prune_bu_layers) {
      LayerSet skipped = above(layers.max()) & forbidden;
      stats_.pruned_bu_layers += static_cast<std::uint64_t>(skipped.size());
      if (opt_.audit) {
        for (int j : skipped.ids()) audit_supersets(layers.with(j), "layer pruning");
      }
    }

    std::vector<Child> recurse;
    LayerSet recursed;
    if (!r_.full()) {
      for (int j : expandable.ids()) {
        LayerSet child = layers.with(j);
        VertexSet c = child_core(core, child, j);
        if (child_size == p_.s) {
          update(std::move(c), child);
        } else {
          recurse.push_back({j, std::move(c)});
          recursed = recursed.with(j);
        }
      }
    } else {
      std::vector<int> ids = expandable.ids();
      std::vector<std::size_t> overlap(g_.num_layers(), 0);
      for (int j : ids) {
        for (VertexId v : core) overlap[j] += support_.in_core(j, v);
      }
      std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return overlap[a] > overlap[b]; });
      for (std::size_t idx = 0; idx < ids.size(); ++idx) {
        const int j = ids[idx];
        if (opt_.prune_bu_order && r_.below_size_bound(overlap[j])) {
          stats_.pruned_bu_order += ids.size() - idx;
          if (opt_.audit) {
            for (std::size_t rest = idx; rest < ids.size(); ++rest) audit_supersets(layers.with(ids[rest]), "order bound");
          }
          break;
        }
        LayerSet child = layers.with(j);
        VertexSet c = child_core(core, child, j);
        if (child_size == p_.s) {
          update(std::move(c), child);
        } else if (!opt_.prune_bu_subtree || r_.improves(c)) {
          recurse.push_back({j, std::move(c)});
          recursed = recursed.with(j);
        } else {
          ++stats_.pruned_bu_subtree;
          if (opt_.audit) audit_supersets(child, "subtree pruning");
        }
      }
    }

    const LayerSet child_forbidden = opt_.prune_bu_layers ? forbidden | (expandable - recursed) : forbidden;
    for (Child& c : recurse) gen(layers.with(c.j), c.core, child_forbidden);
  }

  // Every size-s superset of `base` must fail to improve the current R.
  void audit_supersets(LayerSet base, const char* rule) {
    const LayerSet rest = LayerSet::all(g_.num_layers()) - base;
    const int need = p_.s - base.size();
    if (need < 0) return;
    for_each_extension(rest, need, [&](LayerSet extra) {
      LayerSet s = base | extra;
      VertexSet c = dcc(g_, s, p_.d, &audit_ws_);
      ++stats_.audit_checks;
      if (r_.improves(c)) {
        stats_.violation(std::string(rule) + ": pruned layer set " + relabel(s, order_).to_string() +
                         " would have improved R");
      }
    });
  }

  const MultiLayerGraph& g_;
  const SupportTable& support_;
  const std::vector<int>& order_;
  const SearchParams& p_;
  const SearchOptions& opt_;
  ResultSet& r_;
  SearchStats& stats_;
  PeelWorkspace ws_;
  PeelWorkspace audit_ws_;
};

}  // namespace

SearchResult bu_dccs(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options) {
  SearchStats stats;
  Preprocessed pre = prepare(g, params, options, stats);
  ResultSet r = seed_results(pre, params, options, stats);

  std::vector<int> order(pre.graph.num_layers());
  std::iota(order.begin(), order.end(), 0);
  if (options.sort_layers) order = sort_layers(pre.support, SortDirection::kDescending);
  MultiLayerGraph sorted = pre.graph.with_layer_order(order);
  SupportTable sorted_support = pre.support.with_layer_order(order);

  BottomUp search(sorted, sorted_support, order, params, options, r, stats);
  search.run();
  return finish(r, pre, std::move(stats));
}

}  // namespace dccs
