#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dccs/types.hpp"

namespace dccs {

// Immutable multi-layer graph over dense vertex ids 0..n-1.
//
// Each layer is stored as a CSR array with sorted neighbor lists. A union CSR
// keeps every vertex pair adjacent on at least one layer once, together with
// the mask of layers carrying that edge.
class MultiLayerGraph {
 public:
  MultiLayerGraph() = default;

  std::size_t num_vertices() const { return external_ids_.size(); }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  std::size_t num_edges(int layer) const { return layers_.at(layer).adj.size() / 2; }
  std::size_t total_edges() const;
  std::size_t union_edges() const { return union_adj_.size() / 2; }

  std::span<const VertexId> neighbors(int layer, VertexId v) const {
    const Csr& c = layers_[layer];
    return {c.adj.data() + c.offsets[v], c.adj.data() + c.offsets[v + 1]};
  }
  std::size_t degree(int layer, VertexId v) const {
    const Csr& c = layers_[layer];
    return c.offsets[v + 1] - c.offsets[v];
  }
  bool has_edge(int layer, VertexId u, VertexId v) const;

  // Neighbors over all layers, each paired with the mask of layers carrying the edge.
  std::span<const VertexId> union_neighbors(VertexId v) const {
    return {union_adj_.data() + union_offsets_[v], union_adj_.data() + union_offsets_[v + 1]};
  }
  std::span<const std::uint64_t> union_masks(VertexId v) const {
    return {union_mask_.data() + union_offsets_[v], union_mask_.data() + union_offsets_[v + 1]};
  }

  const std::string& external_id(VertexId v) const { return external_ids_.at(v); }
  const std::vector<std::string>& external_ids() const { return external_ids_; }
  std::optional<VertexId> find_vertex(std::string_view external) const;

  // Materialized copy induced by `subset` (sorted, unique); vertex i of the result is subset[i]
  // and keeps its external id.
  MultiLayerGraph induced(std::span<const VertexId> subset) const;

  // Copy whose layer i is layer order[i] of this graph. order lists distinct layers and may omit some.
  MultiLayerGraph with_layer_order(std::span<const int> order) const;

 private:
  friend class GraphBuilder;

  struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<VertexId> adj;
  };

  void build_union();

  std::vector<std::string> external_ids_;
  std::vector<Csr> layers_;
  std::vector<std::size_t> union_offsets_;
  std::vector<VertexId> union_adj_;
  std::vector<std::uint64_t> union_mask_;
};

// Accumulates vertices and undirected edges, then produces a MultiLayerGraph.
// Self-loops and repeated edges are dropped and counted.
class GraphBuilder {
 public:
  explicit GraphBuilder(int num_layers);

  int num_layers() const { return num_layers_; }
  void grow_layers(int num_layers);
  std::size_t num_vertices() const { return ids_.size(); }

  // Returns the dense id for `external`, registering it on first sight.
  VertexId vertex(std::string_view external);
  // Registers vertices "0".."n-1" in that order.
  void add_numbered_vertices(std::size_t n);

  void add_edge(int layer, VertexId u, VertexId v);
  void add_edge(int layer, std::string_view u, std::string_view v) {
    add_edge(layer, vertex(u), vertex(v));
  }

  std::size_t self_loops() const { return self_loops_; }
  std::size_t duplicates() const { return duplicates_; }

  MultiLayerGraph build();

 private:
  int num_layers_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, VertexId> lookup_;
  std::vector<std::vector<std::pair<VertexId, VertexId>>> edges_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

struct LoadReport {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

// Text edge list: optional "# layers=<l>" and "# vertices=<n>" headers,
// "# vertex <id>" declarations, and "<layer> <u> <v>" lines with 1-based layers.
MultiLayerGraph load_triples(std::istream& in, LoadReport* report = nullptr);
MultiLayerGraph load_triples_file(const std::filesystem::path& path, LoadReport* report = nullptr);

// Directory of layer_<i>.edges files with "<u> <v>" lines.
MultiLayerGraph load_layer_dir(const std::filesystem::path& dir, LoadReport* report = nullptr);

void write_triples(std::ostream& out, const MultiLayerGraph& g);

struct PlantedBlock {
  VertexId first = 0;  // inclusive
  VertexId last = 0;   // exclusive
  LayerSet layers;
  double p = 0.0;
};

MultiLayerGraph generate_planted(std::size_t n, int num_layers, const std::vector<PlantedBlock>& blocks,
                                 double background_p, std::uint64_t seed);

// Contiguous blocks of 12..40 vertices, roughly half of them planted on a random layer subset,
// used when no explicit block list is given.
std::vector<PlantedBlock> random_blocks(std::size_t n, int num_layers, std::uint64_t seed);

}  // namespace dccs
