#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dccs/coredecomp.hpp"
#include "dccs/mlgraph.hpp"
#include "dccs/resultset.hpp"
#include "dccs/types.hpp"

namespace dccs {

// How a subtree skipped by the single-update rule picks the descendant it reports.
enum class DescendantPolicy {
  // The descendant a full depth-first walk of the subtree would reach first.
  kFirst,
  // Removable layers drawn with the run's seeded generator.
  kRandom,
};

struct SearchOptions {
  bool preprocess = true;
  bool init_topk = true;
  bool sort_layers = true;

  // Bottom-up pruning rules.
  bool prune_bu_subtree = true;        // skip a child whose core cannot improve R
  bool prune_bu_order = true;      // stop once the overlap falls below |Cov|/k + |Δ*|
  bool prune_bu_layers = true;     // forbid layers skipped by an ancestor

  // Top-down pruning rules.
  bool prune_td_potential = true;  // skip a subtree whose potential set cannot improve R
  bool prune_td_order = true;      // stop once |U| falls below |Cov|/k + |Δ*|
  bool prune_td_single = true;     // report one descendant when only one can update R

  DescendantPolicy descendant = DescendantPolicy::kFirst;

  // Exhaustively re-checks every pruning decision and refinement step (slow).
  bool audit = false;

  void disable_pruning() {
    prune_bu_subtree = prune_bu_order = prune_bu_layers = false;
    prune_td_potential = prune_td_order = prune_td_single = false;
  }
};

struct SearchStats {
  std::uint64_t candidates = 0;       // size-s cores computed by the search itself
  std::uint64_t init_candidates = 0;  // cores computed while seeding R
  std::uint64_t dcc_calls = 0;
  std::uint64_t nodes = 0;
  std::uint64_t inserted = 0;
  std::uint64_t replaced = 0;
  std::uint64_t rejected = 0;

  std::uint64_t pruned_bu_subtree = 0;
  std::uint64_t pruned_bu_order = 0;
  std::uint64_t pruned_bu_layers = 0;
  std::uint64_t pruned_td_potential = 0;
  std::uint64_t pruned_td_order = 0;
  std::uint64_t single_updates = 0;

  std::uint64_t refine_u_calls = 0;
  std::uint64_t refine_c_calls = 0;
  std::uint64_t refine_c_touches = 0;

  std::uint64_t preprocess_rounds = 0;
  std::uint64_t preprocess_removed = 0;

  std::uint64_t audit_checks = 0;
  std::uint64_t audit_violations = 0;
  std::vector<std::string> audit_messages;

  void record(UpdateOutcome outcome);
  void violation(std::string message);
};

struct SearchResult {
  std::vector<CoherentCore> cores;  // vertex ids and layer ids of the input graph
  std::size_t cover = 0;
  SearchStats stats;
};

// Shared front half of the search algorithms: optional vertex deletion and per-layer cores
// on the reduced graph.
Preprocessed prepare(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options,
                     SearchStats& stats);

// Maps R (reduced vertex ids, input layer ids) back to the input graph, dropping empty cores.
SearchResult finish(const ResultSet& r, const Preprocessed& pre, SearchStats stats);

std::size_t cover_of(const std::vector<CoherentCore>& cores);

}  // namespace dccs
