#include <gtest/gtest.h>

#include <map>
#include <set>

#include "dccs/resultset.hpp"
#include "test_support.hpp"

namespace dccs {
namespace {

using testing::make_graph;
using testing::t1;

CoherentCore core(VertexSet v, LayerSet l = LayerSet{0}) { return {std::move(v), l}; }

// Plain re-implementation of the two update rules over a vector of sets.
class ModelResults {
 public:
  explicit ModelResults(int k) : k_(k) {}

  static std::size_t cover(const std::vector<VertexSet>& r) {
    std::set<VertexId> all;
    for (const VertexSet& s : r) all.insert(s.begin(), s.end());
    return all.size();
  }

  // Index of the member with the fewest vertices no other member has; earliest on ties.
  std::size_t min_exclusive_index() const {
    std::size_t best = 0, best_size = 0;
    for (std::size_t i = 0; i < r_.size(); ++i) {
      std::size_t own = exclusive(i);
      if (i == 0 || own < best_size) {
        best = i;
        best_size = own;
      }
    }
    return best;
  }

  std::size_t exclusive(std::size_t i) const {
    std::size_t own = 0;
    for (VertexId v : r_[i]) {
      bool shared = false;
      for (std::size_t j = 0; j < r_.size() && !shared; ++j) {
        shared = j != i && std::binary_search(r_[j].begin(), r_[j].end(), v);
      }
      own += shared ? 0 : 1;
    }
    return own;
  }

  UpdateOutcome update(const VertexSet& c) {
    if (static_cast<int>(r_.size()) < k_) {
      r_.push_back(c);
      return UpdateOutcome::kInsertedRule1;
    }
    std::size_t star = min_exclusive_index();
    std::vector<VertexSet> swapped = r_;
    swapped.erase(swapped.begin() + static_cast<std::ptrdiff_t>(star));
    swapped.push_back(c);
    const auto k = static_cast<std::size_t>(k_);
    if (k * cover(swapped) >= (k + 1) * cover(r_)) {
      r_ = swapped;
      return UpdateOutcome::kReplacedRule2;
    }
    return UpdateOutcome::kRejected;
  }

  const std::vector<VertexSet>& sets() const { return r_; }

 private:
  int k_;
  std::vector<VertexSet> r_;
};

std::vector<VertexSet> vertex_sets(const ResultSet& r) {
  std::vector<VertexSet> out;
  for (const CoherentCore& c : r.cores()) out.push_back(c.vertices);
  return out;
}

TEST(ResultSet, CoverExamples) {
  ResultSet empty(3);
  EXPECT_EQ(empty.cover_size(), 0u);
  ResultSet r(3);
  r.try_update(core({1, 2, 3}));
  r.try_update(core({3, 4}));
  EXPECT_EQ(r.cover_size(), 4u);
  ResultSet dup(3);
  dup.try_update(core({1, 2}, LayerSet{0}));
  dup.try_update(core({1, 2}, LayerSet{1}));
  EXPECT_EQ(dup.cover_size(), 2u);
  EXPECT_EQ(dup.size(), 2u);
}

TEST(ResultSet, MinExclusiveExamples) {
  ResultSet r(3);
  r.try_update(core({1, 2, 3}));
  r.try_update(core({3, 4}));
  EXPECT_EQ(r.min_exclusive().first.vertices, (VertexSet{3, 4}));
  EXPECT_EQ(r.min_exclusive().second, 1u);

  ResultSet tie(3);
  tie.try_update(core({1}));
  tie.try_update(core({2}));
  EXPECT_EQ(tie.min_exclusive().first.vertices, VertexSet{1});

  ResultSet one(3);
  one.try_update(core({7, 8}));
  EXPECT_EQ(one.min_exclusive().first.vertices, (VertexSet{7, 8}));
  EXPECT_EQ(one.min_exclusive().second, 2u);
}

TEST(ResultSet, UpdateExamples) {
  ResultSet small(2);
  small.try_update(core({1, 2, 3}));
  EXPECT_EQ(small.try_update(core({9})), UpdateOutcome::kInsertedRule1);

  ResultSet r(2);
  r.try_update(core({1, 2, 3}));
  r.try_update(core({3, 4}));
  EXPECT_EQ(r.replacement_cover(VertexSet{5, 6, 7, 8}), 7u);
  EXPECT_TRUE(r.improves(VertexSet{5, 6, 7, 8}));
  EXPECT_EQ(r.replacement_cover(VertexSet{3, 4, 9}), 5u);
  EXPECT_FALSE(r.improves(VertexSet{3, 4, 9}));

  ResultSet reject = r;
  EXPECT_EQ(reject.try_update(core({3, 4, 9})), UpdateOutcome::kRejected);
  EXPECT_EQ(vertex_sets(reject), vertex_sets(r));
  EXPECT_EQ(reject.cover_size(), 4u);

  EXPECT_EQ(r.try_update(core({5, 6, 7, 8})), UpdateOutcome::kReplacedRule2);
  EXPECT_EQ(r.cover_size(), 7u);
  EXPECT_EQ(vertex_sets(r), (std::vector<VertexSet>{{1, 2, 3}, {5, 6, 7, 8}}));
  EXPECT_EQ(r.audit(), "");
}

TEST(ResultSet, ZeroCapacityRejectsEverything) {
  ResultSet r(0);
  EXPECT_EQ(r.try_update(core({1})), UpdateOutcome::kRejected);
  EXPECT_EQ(r.size(), 0u);
  EXPECT_THROW(ResultSet(-1), Error);
}

TEST(ResultSet, ThresholdsMatchFreshRecount) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    int k = 1 + static_cast<int>(rng() % 4);
    ResultSet r(k);
    while (!r.full()) {
      VertexSet s;
      for (VertexId v = 0; v < 12; ++v) {
        if (rng() % 3 == 0) s.push_back(v);
      }
      r.try_update(core(s));
    }
    std::vector<VertexSet> sets = vertex_sets(r);
    ModelResults model(k);
    for (const VertexSet& s : sets) model.update(s);
    const std::size_t cov = ModelResults::cover(sets);
    const std::size_t star = model.min_exclusive_index();
    const std::size_t delta = model.exclusive(star);
    ASSERT_EQ(r.cover_size(), cov);
    ASSERT_EQ(r.min_exclusive_size(), delta);
    ASSERT_EQ(r.min_exclusive().first.vertices, sets[star]);
    const auto kk = static_cast<std::size_t>(k);
    for (std::size_t x = 0; x <= 14; ++x) {
      // x < Cov/k + Δ*  and  x < (1/k + 1/k²)Cov + (1 + 1/k)Δ*, cross-multiplied.
      EXPECT_EQ(r.below_size_bound(x), x * kk < cov + kk * delta);
      EXPECT_EQ(r.below_single_update_bound(x), x * kk * kk < (kk + 1) * cov + kk * (kk + 1) * delta);
    }
    VertexSet c;
    for (VertexId v = 0; v < 16; ++v) {
      if (rng() % 2 == 0) c.push_back(v);
    }
    std::vector<VertexSet> swapped = sets;
    swapped.erase(swapped.begin() + static_cast<std::ptrdiff_t>(star));
    swapped.push_back(c);
    EXPECT_EQ(r.replacement_cover(c), ModelResults::cover(swapped));
    // A core smaller than the size bound can never pass the improvement test.
    if (r.below_size_bound(c.size())) EXPECT_FALSE(r.improves(c));
  }
}

TEST(ResultSet, RandomOperationsMatchModelAndRecount) {
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 10000) {
    int k = 1 + static_cast<int>(rng() % 5);
    ResultSet r(k);
    ModelResults model(k);
    for (int op = 0; op < 200; ++op, ++checked) {
      VertexSet s;
      int universe = 6 + static_cast<int>(rng() % 20);
      for (VertexId v = 0; v < static_cast<VertexId>(universe); ++v) {
        if (rng() % 4 == 0) s.push_back(v);
      }
      UpdateOutcome got = r.try_update(core(s, LayerSet(rng() % 16)));
      UpdateOutcome want = model.update(s);
      ASSERT_EQ(got, want) << "op " << checked;
      ASSERT_EQ(r.audit(), "") << "op " << checked;
      ASSERT_EQ(vertex_sets(r), model.sets()) << "op " << checked;
      ASSERT_EQ(r.cover_size(), ModelResults::cover(model.sets()));
    }
  }
}

TEST(ResultSet, CopiesAreIndependent) {
  ResultSet a(2);
  a.try_update(core({1, 2}));
  ResultSet b = a;
  b.try_update(core({3}));
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(a.audit(), "");
  EXPECT_EQ(b.audit(), "");
}

TEST(InitTopK, T1PicksBothLayers) {
  MultiLayerGraph g = t1();
  SupportTable sup = support_table(g, 2);
  ResultSet r = init_topk(g, sup, 2, 2, 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.cores()[0].layers, (LayerSet{0, 1}));
  EXPECT_EQ(r.cores()[0].vertices, (VertexSet{0, 1, 2}));
}

TEST(InitTopK, ZeroCapacityIsEmpty) {
  MultiLayerGraph g = t1();
  ResultSet r = init_topk(g, support_table(g, 2), 2, 2, 0);
  EXPECT_EQ(r.size(), 0u);
}

TEST(InitTopK, DisjointLayersTakeTheLargestCores) {
  std::vector<std::tuple<int, VertexId, VertexId>> edges;
  auto clique = [&](int layer, VertexId first, VertexId last) {
    for (VertexId u = first; u < last; ++u) {
      for (VertexId v = u + 1; v < last; ++v) edges.emplace_back(layer, u, v);
    }
  };
  clique(1, 0, 4);
  clique(2, 4, 9);
  clique(3, 9, 12);
  MultiLayerGraph g = make_graph(3, 12, edges);
  InitStats stats;
  ResultSet r = init_topk(g, support_table(g, 2), 2, 1, 2, &stats);
  ASSERT_EQ(r.size(), 2u);
  auto cores = r.cores();
  EXPECT_EQ(cores[0].layers, LayerSet{1});
  EXPECT_EQ(cores[0].vertices, (VertexSet{4, 5, 6, 7, 8}));
  EXPECT_EQ(cores[1].layers, LayerSet{0});
  EXPECT_EQ(cores[1].vertices, (VertexSet{0, 1, 2, 3}));
  EXPECT_GE(stats.candidates, 2u);
}

TEST(InitTopK, MembersAreTrueCoresOfSizeS) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    MultiLayerGraph g = testing::random_graph(rng, 16, 4, 0.1, 0.6);
    for (int s = 1; s <= 4; ++s) {
      for (int k = 1; k <= 4; ++k) {
        SupportTable sup = support_table(g, 2);
        ResultSet r = init_topk(g, sup, 2, s, k);
        EXPECT_LE(static_cast<int>(r.size()), k);
        EXPECT_EQ(r.audit(), "");
        for (const CoherentCore& c : r.cores()) {
          EXPECT_EQ(c.layers.size(), s);
          EXPECT_EQ(c.vertices, dcc(g, c.layers, 2));
        }
      }
    }
  }
}

}  // namespace
}  // namespace dccs
