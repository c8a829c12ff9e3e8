#include "dccs/coredecomp.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace dccs {

namespace {

VertexSet all_vertices(const MultiLayerGraph& g) {
  VertexSet v(g.num_vertices());
  std::iota(v.begin(), v.end(), VertexId{0});
  return v;
}

void check_layers(const MultiLayerGraph& g, LayerSet layers) {
  if (!layers.subset_of(LayerSet::all(g.num_layers()))) {
    throw Error("layer set " + layers.to_string() + " outside 1.." + std::to_string(g.num_layers()));
  }
}

}  // namespace

// Bucket peeling keyed by m(v) = min over L of the degree inside the scope. Keys are
// capped at d: only the split between "below d" and "at least d" affects the result,
// so buckets 0..d suffice and a vertex whose key already fell below d is never touched again.
VertexSet PeelWorkspace::peel(const MultiLayerGraph& g, LayerSet layers, int d, std::span<const VertexId> scope) {
  touches_ = 0;
  check_layers(g, layers);
  if (layers.empty() || d <= 0) return VertexSet(scope.begin(), scope.end());

  const std::size_t n = g.num_vertices();
  if (local_.size() < n) local_.resize(n, kAbsent);
  const auto cnt = static_cast<std::uint32_t>(scope.size());
  const std::uint64_t lbits = layers.bits();
  const std::vector<int> ids = layers.ids();
  const auto nl = static_cast<std::uint32_t>(ids.size());
  std::array<std::uint32_t, LayerSet::kMaxLayers> slot{};
  for (std::uint32_t t = 0; t < nl; ++t) slot[ids[t]] = t;
  const auto cap = static_cast<std::uint32_t>(d);

  for (std::uint32_t a = 0; a < cnt; ++a) local_[scope[a]] = a;

  deg_.assign(static_cast<std::size_t>(cnt) * nl, 0);
  m_.assign(cnt, 0);
  for (std::uint32_t a = 0; a < cnt; ++a) {
    VertexId v = scope[a];
    auto nb = g.union_neighbors(v);
    auto masks = g.union_masks(v);
    touches_ += nb.size();
    std::uint32_t* dv = deg_.data() + static_cast<std::size_t>(a) * nl;
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (local_[nb[e]] == kAbsent) continue;
      for (std::uint64_t b = masks[e] & lbits; b != 0; b &= b - 1) ++dv[slot[std::countr_zero(b)]];
    }
    std::uint32_t m = cap;
    for (std::uint32_t t = 0; t < nl; ++t) m = std::min(m, dv[t]);
    m_[a] = m;
  }

  // Counting sort into ver/pos/bin.
  bin_.assign(cap + 2, 0);
  for (std::uint32_t a = 0; a < cnt; ++a) ++bin_[m_[a] + 1];
  for (std::uint32_t k = 0; k <= cap; ++k) bin_[k + 1] += bin_[k];
  ver_.resize(cnt);
  pos_.resize(cnt);
  {
    std::vector<std::uint32_t> fill(bin_.begin(), bin_.end() - 1);
    for (std::uint32_t a = 0; a < cnt; ++a) {
      pos_[a] = fill[m_[a]]++;
      ver_[pos_[a]] = a;
    }
  }

  for (std::uint32_t i = 0; i < bin_[cap]; ++i) {
    std::uint32_t a = ver_[i];
    VertexId v = scope[a];
    auto nb = g.union_neighbors(v);
    auto masks = g.union_masks(v);
    touches_ += nb.size();
    for (std::size_t e = 0; e < nb.size(); ++e) {
      std::uint32_t b = local_[nb[e]];
      if (b == kAbsent || m_[b] < cap) continue;
      std::uint32_t* db = deg_.data() + static_cast<std::size_t>(b) * nl;
      bool drops = false;
      for (std::uint64_t bits = masks[e] & lbits; bits != 0; bits &= bits - 1) {
        if (--db[slot[std::countr_zero(bits)]] < cap) drops = true;
      }
      if (drops) {
        // Move b to the front of the top bucket, then shrink that bucket past it.
        std::uint32_t pb = pos_[b];
        std::uint32_t front = bin_[cap];
        std::uint32_t w = ver_[front];
        ver_[front] = b;
        pos_[b] = front;
        ver_[pb] = w;
        pos_[w] = pb;
        ++bin_[cap];
        m_[b] = cap - 1;
      }
    }
  }

  VertexSet out;
  out.reserve(cnt - bin_[cap]);
  for (std::uint32_t a = 0; a < cnt; ++a) {
    if (m_[a] >= cap) out.push_back(scope[a]);
    local_[scope[a]] = kAbsent;
  }
  return out;
}

VertexSet d_core(const MultiLayerGraph& g, int layer, int d, PeelWorkspace* ws) {
  if (layer < 0 || layer >= g.num_layers()) throw Error("layer " + std::to_string(layer + 1) + " out of range");
  return dcc(g, LayerSet{layer}, d, ws);
}

VertexSet dcc(const MultiLayerGraph& g, LayerSet layers, int d, PeelWorkspace* ws) {
  VertexSet scope = all_vertices(g);
  return dcc_bounded(g, layers, d, scope, ws);
}

VertexSet dcc_bounded(const MultiLayerGraph& g, LayerSet layers, int d, std::span<const VertexId> seed,
                      PeelWorkspace* ws) {
  if (ws) return ws->peel(g, layers, d, seed);
  PeelWorkspace local;
  return local.peel(g, layers, d, seed);
}

SupportTable SupportTable::with_layer_order(std::span<const int> order) const {
  SupportTable out;
  out.d = d;
  out.core_mask.assign(core_mask.size(), 0);
  out.cores.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.cores.push_back(cores.at(order[i]));
    for (VertexId v : out.cores.back()) out.core_mask[v] |= std::uint64_t{1} << i;
  }
  return out;
}

SupportTable support_table(const MultiLayerGraph& g, int d, PeelWorkspace* ws) {
  PeelWorkspace local;
  PeelWorkspace& w = ws ? *ws : local;
  SupportTable st;
  st.d = d;
  st.core_mask.assign(g.num_vertices(), 0);
  VertexSet scope = all_vertices(g);
  for (int i = 0; i < g.num_layers(); ++i) {
    st.cores.push_back(w.peel(g, LayerSet{i}, d, scope));
    for (VertexId v : st.cores.back()) st.core_mask[v] |= std::uint64_t{1} << i;
  }
  return st;
}

Preprocessed preprocess_vertex_deletion(const MultiLayerGraph& g, int d, int s) {
  if (s > g.num_layers()) throw Error("s exceeds the layer count");
  Preprocessed out;
  out.graph = g;
  out.origin = all_vertices(g);
  PeelWorkspace ws;
  for (;;) {
    out.support = support_table(out.graph, d, &ws);
    VertexSet keep;
    for (VertexId v = 0; v < out.graph.num_vertices(); ++v) {
      if (out.support.num(v) >= s) keep.push_back(v);
    }
    if (keep.size() == out.graph.num_vertices()) break;
    ++out.rounds;
    std::vector<VertexId> origin;
    origin.reserve(keep.size());
    for (VertexId v : keep) origin.push_back(out.origin[v]);
    out.graph = out.graph.induced(keep);
    out.origin = std::move(origin);
  }
  return out;
}

Preprocessed without_preprocessing(const MultiLayerGraph& g, int d) {
  Preprocessed out;
  out.graph = g;
  out.origin = all_vertices(g);
  out.support = support_table(g, d);
  return out;
}

std::vector<int> sort_layers(const SupportTable& support, SortDirection direction) {
  std::vector<int> order(support.cores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    std::size_t sa = support.cores[a].size();
    std::size_t sb = support.cores[b].size();
    return direction == SortDirection::kAscending ? sa < sb : sa > sb;
  });
  return order;
}

}  // namespace dccs
