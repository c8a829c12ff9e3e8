#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dccs/mlgraph.hpp"
#include "dccs/types.hpp"

namespace dccs {

// Reusable buffers for bucket peeling. A workspace is tied to no particular graph,
// but must not be shared between threads.
class PeelWorkspace {
 public:
  PeelWorkspace() = default;

  // Peels G[scope] on the layers of L; scope must be sorted and unique.
  VertexSet peel(const MultiLayerGraph& g, LayerSet layers, int d, std::span<const VertexId> scope);

  // Number of adjacency entries read by the last peel.
  std::uint64_t last_touches() const { return touches_; }

 private:
  static constexpr std::uint32_t kAbsent = static_cast<std::uint32_t>(-1);

  std::vector<std::uint32_t> local_;  // global id -> scope position, kAbsent elsewhere
  std::vector<std::uint32_t> deg_;    // scope position * |L| + t
  std::vector<std::uint32_t> m_;
  std::vector<std::uint32_t> ver_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> bin_;
  std::uint64_t touches_ = 0;
};

// d-core of a single layer.
VertexSet d_core(const MultiLayerGraph& g, int layer, int d, PeelWorkspace* ws = nullptr);

// Maximal vertex set that is d-dense on every layer of L. L empty or d == 0 returns V.
VertexSet dcc(const MultiLayerGraph& g, LayerSet layers, int d, PeelWorkspace* ws = nullptr);

// Same as dcc, but only peels inside `seed`; exact when the true answer lies inside `seed`.
VertexSet dcc_bounded(const MultiLayerGraph& g, LayerSet layers, int d, std::span<const VertexId> seed,
                      PeelWorkspace* ws = nullptr);

// Per-layer d-core membership.
struct SupportTable {
  int d = 0;
  std::vector<std::uint64_t> core_mask;  // bit i set when v is in the d-core of layer i
  std::vector<VertexSet> cores;          // per layer, sorted

  int num(VertexId v) const { return std::popcount(core_mask[v]); }
  bool in_core(int layer, VertexId v) const { return (core_mask[v] >> layer) & 1U; }

  // Table for the same graph with layer i renamed to position of i in `order` (order[new] = old).
  SupportTable with_layer_order(std::span<const int> order) const;
};

SupportTable support_table(const MultiLayerGraph& g, int d, PeelWorkspace* ws = nullptr);

struct Preprocessed {
  MultiLayerGraph graph;
  std::vector<VertexId> origin;  // reduced id -> id in the input graph (increasing)
  SupportTable support;
  int rounds = 0;
};

// Repeatedly deletes vertices lying in fewer than s per-layer d-cores until none remain.
Preprocessed preprocess_vertex_deletion(const MultiLayerGraph& g, int d, int s);

// Wraps g without removing anything.
Preprocessed without_preprocessing(const MultiLayerGraph& g, int d);

// Layer permutation by per-layer d-core size, stable on ties; result[new] = old.
enum class SortDirection { kAscending, kDescending };
std::vector<int> sort_layers(const SupportTable& support, SortDirection direction);

}  // namespace dccs
