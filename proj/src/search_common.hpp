#pragma once

#include <functional>
#include <vector>

#include "dccs/search.hpp"

namespace dccs {

// Maps layer ids of a relabeled graph (new i = old order[i]) back to the original ids.
inline LayerSet relabel(LayerSet layers, const std::vector<int>& order) {
  LayerSet out;
  for (int i : layers.ids()) out = out.with(order[i]);
  return out;
}

// Calls fn for every subset of `pool` with exactly `count` members.
inline void for_each_extension(LayerSet pool, int count, const std::function<void(LayerSet)>& fn) {
  std::vector<int> ids = pool.ids();
  if (count < 0 || count > static_cast<int>(ids.size())) return;
  std::vector<int> idx(count);
  for (int i = 0; i < count; ++i) idx[i] = i;
  const int n = static_cast<int>(ids.size());
  for (;;) {
    LayerSet s;
    for (int i : idx) s = s.with(ids[i]);
    fn(s);
    int pos = count - 1;
    while (pos >= 0 && idx[pos] == n - count + pos) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int i = pos + 1; i < count; ++i) idx[i] = idx[i - 1] + 1;
  }
}

inline ResultSet seed_results(const Preprocessed& pre, const SearchParams& params, const SearchOptions& options,
                              SearchStats& stats) {
  if (!options.init_topk) return ResultSet(params.k);
  InitStats init;
  ResultSet r = init_topk(pre.graph, pre.support, params.d, params.s, params.k, &init);
  stats.init_candidates += init.candidates;
  stats.dcc_calls += init.dcc_calls;
  return r;
}

}  // namespace dccs
