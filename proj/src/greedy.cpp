#include "dccs/greedy.hpp"

#include <algorithm>

#include "search_common.hpp"

namespace dccs {

std::vector<CoherentCore> enumerate_candidates(const MultiLayerGraph& g, const SupportTable& support, int d, int s,
                                               SearchStats* stats) {
  const int l = g.num_layers();
  if (s > l) throw Error("s exceeds the layer count");
  if (s < 1) throw Error("s must be at least 1");
  std::vector<CoherentCore> out;
  PeelWorkspace ws;
  for_each_extension(LayerSet::all(l), s, [&](LayerSet layers) {
    VertexSet seed;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if ((support.core_mask[v] & layers.bits()) == layers.bits()) seed.push_back(v);
    }
    out.push_back({dcc_bounded(g, layers, d, seed, &ws), layers});
    if (stats) {
      ++stats->candidates;
      ++stats->dcc_calls;
    }
  });
  return out;
}

std::vector<CoherentCore> greedy_select(std::span<const CoherentCore> candidates, int k) {
  std::vector<CoherentCore> picked;
  std::vector<bool> taken(candidates.size(), false);
  VertexId max_id = 0;
  for (const CoherentCore& c : candidates) {
    if (!c.vertices.empty()) max_id = std::max(max_id, c.vertices.back());
  }
  std::vector<bool> covered(static_cast<std::size_t>(max_id) + 1, false);
  const std::size_t rounds = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), candidates.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      std::size_t gain = 0;
      for (VertexId v : candidates[i].vertices) gain += !covered[v];
      if (best == candidates.size() || gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    taken[best] = true;
    for (VertexId v : candidates[best].vertices) covered[v] = true;
    picked.push_back(candidates[best]);
  }
  return picked;
}

SearchResult gd_dccs(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options) {
  SearchStats stats;
  Preprocessed pre = prepare(g, params, options, stats);
  std::vector<CoherentCore> candidates = enumerate_candidates(pre.graph, pre.support, params.d, params.s, &stats);
  std::vector<CoherentCore> picked = greedy_select(candidates, params.k);
  SearchResult out;
  for (CoherentCore& c : picked) {
    if (c.vertices.empty()) continue;
    for (VertexId& v : c.vertices) v = pre.origin[v];
    out.cores.push_back(std::move(c));
  }
  out.cover = cover_of(out.cores);
  out.stats = std::move(stats);
  return out;
}

}  // namespace dccs
