#pragma once

#include <span>
#include <vector>

#include "dccs/search.hpp"

namespace dccs {

// Every size-s layer set in lexicographic order with its d-CC, peeled inside the
// intersection of the per-layer d-cores. Empty cores are included.
std::vector<CoherentCore> enumerate_candidates(const MultiLayerGraph& g, const SupportTable& support, int d, int s,
                                               SearchStats* stats = nullptr);

// k rounds of greedy max coverage; ties go to the earliest candidate. Returns the picks in order.
std::vector<CoherentCore> greedy_select(std::span<const CoherentCore> candidates, int k);

SearchResult gd_dccs(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options = {});

}  // namespace dccs
