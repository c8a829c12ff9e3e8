#include "dccs/search.hpp"

#include <algorithm>

namespace dccs {

void SearchStats::record(UpdateOutcome outcome) {
  switch (outcome) {
    case UpdateOutcome::kInsertedRule1:
      ++inserted;
      break;
    case UpdateOutcome::kReplacedRule2:
      ++replaced;
      break;
    case UpdateOutcome::kRejected:
      ++rejected;
      break;
  }
}

void SearchStats::violation(std::string message) {
  ++audit_violations;
  if (audit_messages.size() < 20) audit_messages.push_back(std::move(message));
}

Preprocessed prepare(const MultiLayerGraph& g, const SearchParams& params, const SearchOptions& options,
                     SearchStats& stats) {
  params.validate(g.num_layers());
  Preprocessed pre = options.preprocess ? preprocess_vertex_deletion(g, params.d, params.s)
                                        : without_preprocessing(g, params.d);
  stats.preprocess_rounds = static_cast<std::uint64_t>(pre.rounds);
  stats.preprocess_removed = g.num_vertices() - pre.graph.num_vertices();
  return pre;
}

SearchResult finish(const ResultSet& r, const Preprocessed& pre, SearchStats stats) {
  SearchResult out;
  for (CoherentCore& c : r.cores()) {
    if (c.vertices.empty()) continue;
    for (VertexId& v : c.vertices) v = pre.origin[v];
    out.cores.push_back(std::move(c));
  }
  out.cover = cover_of(out.cores);
  out.stats = std::move(stats);
  return out;
}

std::size_t cover_of(const std::vector<CoherentCore>& cores) {
  VertexSet all;
  for (const CoherentCore& c : cores) all.insert(all.end(), c.vertices.begin(), c.vertices.end());
  std::sort(all.begin(), all.end());
  return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

}  // namespace dccs
