#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dccs/search.hpp"

namespace dccs {

// Vertices ordered by the support threshold h at which repeated deletion of vertices lying in
// at most h per-layer d-cores removes them, and by the batch of that deletion.
struct CoreIndex {
  int d = 0;
  std::vector<int> cls;                    // h in 1..l per vertex
  std::vector<std::uint32_t> level;        // batch number, increasing with h
  std::vector<std::uint64_t> label;        // layers whose d-core held v just before its batch
  std::vector<std::vector<VertexId>> levels;
  std::vector<int> level_class;

  // Per layer, the neighbors of each vertex that sit on a strictly higher level.
  struct Up {
    std::vector<std::size_t> offsets;
    std::vector<VertexId> adj;
  };
  std::vector<Up> up;

  std::span<const VertexId> up_neighbors(int layer, VertexId v) const {
    const Up& u = up[layer];
    return {u.adj.data() + u.offsets[v], u.adj.data() + u.offsets[v + 1]};
  }
};

CoreIndex build_core_index(const MultiLayerGraph& g, int d);

// Layers of a top-down node that every size-s descendant keeps, and those it may still drop.
struct LayerSplit {
  LayerSet committed;
  LayerSet removable;
};
LayerSplit split_layers(LayerSet layers, int num_layers);

// Shrinks the parent's potential set for the child `layers`: peel on committed layers and drop
// vertices that lie in fewer than s - |committed| of the removable layers' d-cores, to a fixpoint.
VertexSet refine_u(const MultiLayerGraph& g, int d, int s, std::span<const VertexId> parent, LayerSet layers,
                   PeelWorkspace* ws = nullptr);

struct RefineStats {
  // d+ increments during setup, d+ decrements during discards, and upward edge checks.
  std::uint64_t touches = 0;
  // Adjacency entries read, including ones that lead outside the scope or to discarded vertices.
  std::uint64_t scanned = 0;
  std::size_t scope = 0;
};

// d-CC of `layers` inside the potential set U, swept level by level over the index.
VertexSet refine_c(const MultiLayerGraph& g, const CoreIndex& index, int d, std::span<const VertexId> potential,
                   LayerSet layers, RefineStats* stats = nullptr);

// Sum over layers in L of the edges with both ends in U.
std::uint64_t layer_edges_within(const MultiLayerGraph& g, std::span<const VertexId> u, LayerSet layers);

// Depth-first search downward from all layers, dropping one layer at a time.
SearchResult td_dccs(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options = {});

}  // namespace dccs
