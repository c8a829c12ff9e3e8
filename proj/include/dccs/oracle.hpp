#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dccs/mlgraph.hpp"
#include "dccs/resultset.hpp"
#include "dccs/types.hpp"

// Brute-force reference implementations. Nothing here calls into the peeling or search code.
namespace dccs::oracle {

// Sweeps the vertices in a seeded random order, deleting any with fewer than d live neighbors on
// some layer of L, until a sweep deletes nothing. seed 0 sweeps in id order.
VertexSet naive_dcc(const MultiLayerGraph& g, LayerSet layers, int d, std::uint64_t seed = 0);

class TooLarge : public Error {
 public:
  using Error::Error;
};

struct ExactResult {
  std::vector<CoherentCore> cores;  // nonempty members of a best choice
  std::size_t opt = 0;
  std::vector<CoherentCore> candidates;  // every size-s layer set in lexicographic order
};

// Tries every k-subset of the candidates. Throws TooLarge when C(l,s) * C(|F|,k) exceeds `limit`.
ExactResult exact_dccs(const MultiLayerGraph& g, int d, int s, int k, double limit = 1e7);

struct CoreReport {
  bool dense = true;
  bool maximal = true;
  std::string detail;
  bool ok() const { return dense && maximal; }
};

CoreReport verify_core(const MultiLayerGraph& g, const CoherentCore& core, int d);

// Classic greedy max coverage over plain vertex sets; returns the cover size.
std::size_t greedy_cover(std::span<const VertexSet> sets, int k);

std::size_t union_size(std::span<const VertexSet> sets);

}  // namespace dccs::oracle
