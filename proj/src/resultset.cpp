#include "dccs/resultset.hpp"

#include <algorithm>
#include <numeric>

namespace dccs {

const char* to_string(UpdateOutcome outcome) {
  switch (outcome) {
    case UpdateOutcome::kInsertedRule1:
      return "inserted";
    case UpdateOutcome::kReplacedRule2:
      return "replaced";
    case UpdateOutcome::kRejected:
      return "rejected";
  }
  return "?";
}

ResultSet::ResultSet(int k) : k_(k) {
  if (k < 0) throw Error("k must be non-negative");
}

std::uint32_t ResultSet::min_slot() const {
  if (by_exclusive_.empty()) throw Error("result set is empty");
  return by_exclusive_.begin()->second.begin()->second;
}

std::pair<const CoherentCore&, std::size_t> ResultSet::min_exclusive() const {
  const Member& m = members_[min_slot()];
  return {m.core, m.exclusive};
}

std::size_t ResultSet::min_exclusive_size() const {
  return by_exclusive_.empty() ? 0 : by_exclusive_.begin()->first;
}

std::size_t ResultSet::replacement_cover(std::span<const VertexId> c) const {
  std::uint32_t star = min_slot();
  std::size_t count = 0;
  for (VertexId v : c) {
    auto it = cover_.find(v);
    if (it == cover_.end() || (it->second.size() == 1 && it->second.front() == star)) ++count;
  }
  return count + cover_.size() - members_[star].exclusive;
}

bool ResultSet::improves(std::span<const VertexId> c) const {
  if (live_ == 0) return true;
  const auto k = static_cast<std::uint64_t>(k_);
  return k * replacement_cover(c) >= (k + 1) * cover_.size();
}

bool ResultSet::below_size_bound(std::size_t x) const {
  const auto k = static_cast<std::uint64_t>(k_);
  return k * x < cover_.size() + k * min_exclusive_size();
}

bool ResultSet::below_single_update_bound(std::size_t x) const {
  const auto k = static_cast<std::uint64_t>(k_);
  return k * k * x < (k + 1) * cover_.size() + k * (k + 1) * min_exclusive_size();
}

UpdateOutcome ResultSet::try_update(CoherentCore c) {
  touches_ = 0;
  if (k_ == 0) return UpdateOutcome::kRejected;
  if (!full()) {
    insert(std::move(c));
    return UpdateOutcome::kInsertedRule1;
  }
  touches_ += c.vertices.size();
  if (!improves(c.vertices)) return UpdateOutcome::kRejected;
  erase(min_slot());
  insert(std::move(c));
  return UpdateOutcome::kReplacedRule2;
}

void ResultSet::move_bucket(std::uint32_t slot, std::size_t from, std::size_t to) {
  if (from == to) return;
  const std::uint64_t seq = members_[slot].seq;
  auto it = by_exclusive_.find(from);
  it->second.erase({seq, slot});
  if (it->second.empty()) by_exclusive_.erase(it);
  by_exclusive_[to].insert({seq, slot});
  ++touches_;
}

void ResultSet::note_change(std::uint32_t slot) {
  Member& m = members_[slot];
  if (m.pending) return;
  m.pending = true;
  m.bucket_before = m.exclusive;
  pending_.push_back(slot);
}

void ResultSet::flush_pending() {
  for (std::uint32_t slot : pending_) {
    Member& m = members_[slot];
    m.pending = false;
    move_bucket(slot, m.bucket_before, m.exclusive);
  }
  pending_.clear();
}

void ResultSet::erase(std::uint32_t slot) {
  Member& gone = members_[slot];
  {
    auto it = by_exclusive_.find(gone.exclusive);
    it->second.erase({gone.seq, slot});
    if (it->second.empty()) by_exclusive_.erase(it);
  }
  for (VertexId v : gone.core.vertices) {
    ++touches_;
    auto it = cover_.find(v);
    SlotList& list = it->second;
    auto pos = std::find(list.begin(), list.end(), slot);
    *pos = list.back();
    list.pop_back();
    if (list.empty()) {
      cover_.erase(it);
    } else if (list.size() == 1) {
      note_change(list.front());
      ++members_[list.front()].exclusive;
    }
  }
  flush_pending();
  gone.live = false;
  gone.core = {};
  gone.exclusive = 0;
  free_.push_back(slot);
  --live_;
}

void ResultSet::insert(CoherentCore c) {
  std::uint32_t slot;
  if (!free_.empty()) {
    slot = free_.back();
    free_.pop_back();
  } else {
    slot = static_cast<std::uint32_t>(members_.size());
    members_.emplace_back();
  }
  members_[slot].core = std::move(c);
  members_[slot].seq = next_seq_++;
  members_[slot].live = true;
  members_[slot].exclusive = 0;
  for (VertexId v : members_[slot].core.vertices) {
    ++touches_;
    SlotList& list = cover_[v];
    if (list.empty()) {
      ++members_[slot].exclusive;
    } else if (list.size() == 1) {
      note_change(list.front());
      --members_[list.front()].exclusive;
    }
    list.push_back(slot);
  }
  flush_pending();
  by_exclusive_[members_[slot].exclusive].insert({members_[slot].seq, slot});
  ++touches_;
  ++live_;
}

std::vector<CoherentCore> ResultSet::cores() const {
  std::vector<const Member*> live;
  for (const Member& m : members_) {
    if (m.live) live.push_back(&m);
  }
  std::sort(live.begin(), live.end(), [](const Member* a, const Member* b) { return a->seq < b->seq; });
  std::vector<CoherentCore> out;
  out.reserve(live.size());
  for (const Member* m : live) out.push_back(m->core);
  return out;
}

std::string ResultSet::audit() const {
  std::unordered_map<VertexId, std::vector<std::uint32_t>> fresh;
  std::size_t live = 0;
  for (std::uint32_t slot = 0; slot < members_.size(); ++slot) {
    if (!members_[slot].live) continue;
    ++live;
    for (VertexId v : members_[slot].core.vertices) fresh[v].push_back(slot);
  }
  if (live != live_) return "live member count mismatch";
  if (static_cast<int>(live) > k_) return "more than k members";
  if (fresh.size() != cover_.size()) return "cover size mismatch";
  for (auto& [v, slots] : fresh) {
    auto it = cover_.find(v);
    if (it == cover_.end()) return "vertex " + std::to_string(v) + " missing from cover map";
    std::vector<std::uint32_t> have = it->second;
    std::sort(have.begin(), have.end());
    if (have != slots) return "cover map entry mismatch at vertex " + std::to_string(v);
  }
  std::map<std::size_t, std::set<std::pair<std::uint64_t, std::uint32_t>>> buckets;
  for (std::uint32_t slot = 0; slot < members_.size(); ++slot) {
    const Member& m = members_[slot];
    if (!m.live) continue;
    std::size_t exclusive = 0;
    for (VertexId v : m.core.vertices) exclusive += fresh[v].size() == 1;
    if (exclusive != m.exclusive) return "exclusive count mismatch for slot " + std::to_string(slot);
    buckets[exclusive].insert({m.seq, slot});
  }
  if (buckets != by_exclusive_) return "exclusive buckets mismatch";
  return {};
}

// ---------------------------------------------------------------------------

namespace {

struct Seeded {
  LayerSet layers;
  VertexSet core;
};

Seeded grow_from(const MultiLayerGraph& g, const SupportTable& support, int d, int s, int seed_layer,
                 InitStats* stats, PeelWorkspace& ws) {
  const int l = g.num_layers();
  LayerSet layers{seed_layer};
  VertexSet c = support.cores[seed_layer];
  for (int q = 1; q < s; ++q) {
    int best = -1;
    std::size_t best_overlap = 0;
    for (int j = 0; j < l; ++j) {
      if (layers.contains(j)) continue;
      std::size_t overlap = 0;
      for (VertexId v : c) overlap += support.in_core(j, v);
      if (best < 0 || overlap > best_overlap) {
        best = j;
        best_overlap = overlap;
      }
    }
    layers = layers.with(best);
    std::erase_if(c, [&](VertexId v) { return !support.in_core(best, v); });
  }
  if (stats) {
    ++stats->candidates;
    ++stats->dcc_calls;
  }
  return {layers, dcc_bounded(g, layers, d, c, &ws)};
}

}  // namespace

ResultSet init_topk(const MultiLayerGraph& g, const SupportTable& support, int d, int s, int k, InitStats* stats,
                    PeelWorkspace* ws) {
  const int l = g.num_layers();
  if (s > l) throw Error("s exceeds the layer count");
  if (s < 1) throw Error("s must be at least 1");
  PeelWorkspace local;
  PeelWorkspace& w = ws ? *ws : local;
  ResultSet r(k);
  std::vector<LayerSet> used;
  auto is_used = [&](LayerSet x) { return std::find(used.begin(), used.end(), x) != used.end(); };

  for (int round = 0; round < k; ++round) {
    std::vector<std::pair<std::size_t, int>> ranked;  // (gain, layer)
    for (int i = 0; i < l; ++i) {
      std::size_t gain = 0;
      for (VertexId v : support.cores[i]) gain += !r.covers(v);
      ranked.emplace_back(gain, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](auto a, auto b) { return a.first > b.first; });

    // The best seed normally wins. When its core repeats a layer set or vertex set already in R,
    // later seeds are tried so that R fills up with distinct cores where possible.
    std::optional<Seeded> fallback;
    std::optional<Seeded> chosen;
    const std::vector<CoherentCore> members = r.cores();
    for (auto [gain, i] : ranked) {
      Seeded cand = grow_from(g, support, d, s, i, stats, w);
      bool repeats_layers = is_used(cand.layers);
      bool repeats_vertices = std::any_of(members.begin(), members.end(),
                                          [&](const CoherentCore& m) { return m.vertices == cand.core; });
      if (!repeats_layers && !repeats_vertices) {
        chosen = std::move(cand);
        break;
      }
      if (!fallback || (is_used(fallback->layers) && !repeats_layers)) fallback = std::move(cand);
    }
    if (!chosen) chosen = std::move(fallback);
    used.push_back(chosen->layers);
    r.try_update({std::move(chosen->core), chosen->layers});
  }
  return r;
}

}  // namespace dccs
