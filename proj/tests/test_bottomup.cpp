#include <gtest/gtest.h>

#include "dccs/bottomup.hpp"
#include "dccs/oracle.hpp"
#include "test_support.hpp"

namespace dccs {
namespace {

using testing::make_graph;
using testing::random_graph;
using testing::t1;

TEST(BuDccs, T1) {
  SearchResult r = bu_dccs(t1(), {2, 2, 1, 0});
  ASSERT_EQ(r.cores.size(), 1u);
  EXPECT_EQ(r.cores[0].vertices, (VertexSet{0, 1, 2}));
  EXPECT_EQ(r.cores[0].layers, (LayerSet{0, 1}));
  EXPECT_EQ(r.cover, 3u);
}

TEST(BuDccs, T1WithCopiedThirdLayer) {
  MultiLayerGraph g = make_graph(3, 4,
                                 {{1, 0, 1}, {1, 1, 2}, {1, 0, 2}, {1, 2, 3}, {2, 0, 1}, {2, 1, 2}, {2, 0, 2},
                                  {3, 0, 1}, {3, 1, 2}, {3, 0, 2}, {3, 2, 3}});
  for (bool init : {true, false}) {
    SearchOptions o;
    o.init_topk = init;
    SearchResult r = bu_dccs(g, {2, 2, 1, 0}, o);
    ASSERT_EQ(r.cores.size(), 1u);
    EXPECT_EQ(r.cores[0].vertices, (VertexSet{0, 1, 2}));
    EXPECT_EQ(r.cores[0].layers.size(), 2);
    EXPECT_EQ(r.cover, oracle::exact_dccs(g, 2, 2, 1).opt);
  }
}

TEST(BuDccs, FullCoverLeavesNothingToExpand) {
  // Every layer is the same 4-clique, so the seeded result already covers V.
  std::vector<std::tuple<int, VertexId, VertexId>> edges;
  for (int layer = 1; layer <= 3; ++layer) {
    for (VertexId u = 0; u < 4; ++u) {
      for (VertexId v = u + 1; v < 4; ++v) edges.emplace_back(layer, u, v);
    }
  }
  MultiLayerGraph g = make_graph(3, 4, edges);
  SearchResult r = bu_dccs(g, {2, 2, 1, 0});
  EXPECT_EQ(r.cover, 4u);
  EXPECT_EQ(r.stats.replaced, 0u);
  EXPECT_EQ(r.stats.inserted, 0u);
  // The first single-layer node already fails the order bound for every child.
  EXPECT_GT(r.stats.pruned_bu_order, 0u);
}

TEST(BuDccs, ZeroDegreeSingleLayerCoversEverything) {
  MultiLayerGraph g = make_graph(3, 6, {{1, 0, 1}, {2, 2, 3}});
  SearchResult r = bu_dccs(g, {0, 1, 1, 0});
  ASSERT_EQ(r.cores.size(), 1u);
  EXPECT_EQ(r.cores[0].vertices, testing::all_of(6));
  EXPECT_EQ(r.cover, 6u);
}

TEST(BuDccs, WithinQuarterOfOptimumAndValid) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 80; ++trial) {
    std::size_t n = 6 + rng() % 11;
    int l = 2 + static_cast<int>(rng() % 4);
    MultiLayerGraph g = random_graph(rng, n, l, 0.15, 0.7);
    SearchParams p{1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 3),
                   0};
    auto ex = oracle::exact_dccs(g, p.d, p.s, p.k);
    SearchResult r = bu_dccs(g, p);
    EXPECT_GE(4 * r.cover, ex.opt);
    EXPECT_LE(r.cover, ex.opt);
    EXPECT_LE(static_cast<int>(r.cores.size()), p.k);
    EXPECT_EQ(r.cover, cover_of(r.cores));
    for (const CoherentCore& c : r.cores) {
      EXPECT_EQ(c.layers.size(), p.s);
      EXPECT_TRUE(oracle::verify_core(g, c, p.d).ok());
    }
  }
}

TEST(BuDccs, AuditFindsNoUnsoundPrune) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    MultiLayerGraph g = random_graph(rng, 14, 5, 0.1, 0.6);
    SearchOptions o;
    o.audit = true;
    SearchParams p{2, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 4), 0};
    SearchResult r = bu_dccs(g, p, o);
    EXPECT_EQ(r.stats.audit_violations, 0u) << (r.stats.audit_messages.empty() ? "" : r.stats.audit_messages[0]);
  }
}

TEST(BuDccs, PruningRulesDoNotChangeTheResult) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 60; ++trial) {
    MultiLayerGraph g = random_graph(rng, 14, 5, 0.1, 0.6);
    SearchParams p{2, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 4), 0};
    SearchResult base = bu_dccs(g, p);
    SearchOptions none;
    none.disable_pruning();
    SearchResult all_off = bu_dccs(g, p, none);
    EXPECT_EQ(base.cores, all_off.cores) << "trial " << trial;
    EXPECT_GE(all_off.stats.candidates, base.stats.candidates);
  }
}

TEST(BuDccs, AblationsKeepTheGuarantee) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 40; ++trial) {
    MultiLayerGraph g = random_graph(rng, 14, 4, 0.15, 0.6);
    SearchParams p{2, 2, 2, 0};
    std::size_t opt = oracle::exact_dccs(g, p.d, p.s, p.k).opt;
    for (int mask = 0; mask < 8; ++mask) {
      SearchOptions o;
      o.preprocess = mask & 1;
      o.init_topk = mask & 2;
      o.sort_layers = mask & 4;
      SearchResult r = bu_dccs(g, p, o);
      EXPECT_GE(4 * r.cover, opt);
      for (const CoherentCore& c : r.cores) EXPECT_TRUE(oracle::verify_core(g, c, p.d).ok());
    }
  }
}

}  // namespace
}  // namespace dccs
