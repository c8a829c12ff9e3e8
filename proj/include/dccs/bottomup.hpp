#pragma once

#include "dccs/search.hpp"

namespace dccs {

// Depth-first search upward from single layers, adding one layer with a larger id at a time.
// R is updated whenever a node reaches s layers; once R is full, children that cannot improve it
// are skipped along with their subtrees.
SearchResult bu_dccs(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options = {});

}  // namespace dccs
