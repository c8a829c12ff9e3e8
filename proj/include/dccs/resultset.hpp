#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dccs/coredecomp.hpp"
#include "dccs/types.hpp"

namespace dccs {

struct CoherentCore {
  VertexSet vertices;
  LayerSet layers;

  friend bool operator==(const CoherentCore&, const CoherentCore&) = default;
};

enum class UpdateOutcome { kInsertedRule1, kReplacedRule2, kRejected };

const char* to_string(UpdateOutcome outcome);

// Top-k collection with incremental cover bookkeeping.
//
// cover_ maps each covered vertex to the member slots containing it, and
// by_exclusive_ buckets members by the number of vertices only they cover.
// A full member set is only replaced when the swap grows the cover by a
// factor of at least (1 + 1/k). All thresholds are evaluated in integers.
class ResultSet {
 public:
  explicit ResultSet(int k);

  int capacity() const { return k_; }
  std::size_t size() const { return live_; }
  bool full() const { return static_cast<int>(live_) >= k_; }
  std::size_t cover_size() const { return cover_.size(); }
  bool covers(VertexId v) const { return cover_.count(v) != 0; }

  // Member with the fewest exclusively covered vertices, earliest insertion first on ties.
  std::pair<const CoherentCore&, std::size_t> min_exclusive() const;
  std::size_t min_exclusive_size() const;

  // |Cov((R - {C*}) ∪ {C})| for a sorted vertex set C; requires a nonempty R.
  std::size_t replacement_cover(std::span<const VertexId> c) const;

  // k * |Cov((R - {C*}) ∪ {C})| >= (k + 1) * |Cov(R)|.
  bool improves(std::span<const VertexId> c) const;
  // |C| >= |Cov|/k + |Δ*| is necessary for improves(C); this is its negation for a size x.
  bool below_size_bound(std::size_t x) const;
  // x < (1/k + 1/k²)|Cov| + (1 + 1/k)|Δ*|.
  bool below_single_update_bound(std::size_t x) const;

  UpdateOutcome try_update(CoherentCore c);

  // Members in insertion order.
  std::vector<CoherentCore> cores() const;

  // Map and bucket entries read or written by the last try_update.
  std::uint64_t last_touches() const { return touches_; }

  // Rebuilds cover counts and exclusive sizes from the members and compares them with the
  // incremental state. Returns an empty string when consistent.
  std::string audit() const;

 private:
  using SlotList = std::vector<std::uint32_t>;

  struct Member {
    CoherentCore core;
    std::size_t exclusive = 0;
    std::uint64_t seq = 0;
    bool live = false;
    bool pending = false;
    std::size_t bucket_before = 0;
  };

  void erase(std::uint32_t slot);
  void insert(CoherentCore c);
  void move_bucket(std::uint32_t slot, std::size_t from, std::size_t to);
  void note_change(std::uint32_t slot);
  void flush_pending();
  std::uint32_t min_slot() const;

  int k_;
  std::size_t live_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t touches_ = 0;
  std::vector<Member> members_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> pending_;
  std::unordered_map<VertexId, SlotList> cover_;
  std::map<std::size_t, std::set<std::pair<std::uint64_t, std::uint32_t>>> by_exclusive_;
};

struct InitStats {
  std::uint64_t candidates = 0;
  std::uint64_t dcc_calls = 0;
};

// Seeds R with up to k cores: each round takes the layer whose d-core adds the most new cover,
// grows it with the s-1 layers whose cores overlap the running intersection most, and peels.
// Layer ids in the returned cores refer to g.
ResultSet init_topk(const MultiLayerGraph& g, const SupportTable& support, int d, int s, int k,
                    InitStats* stats = nullptr, PeelWorkspace* ws = nullptr);

}  // namespace dccs
