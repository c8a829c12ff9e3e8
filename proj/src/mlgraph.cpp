#include "dccs/mlgraph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <regex>

#include <spdlog/spdlog.h>

namespace dccs {

namespace {

constexpr VertexId kNone = static_cast<VertexId>(-1);

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw Error("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiLayerGraph

std::size_t MultiLayerGraph::total_edges() const {
  std::size_t m = 0;
  for (const Csr& c : layers_) m += c.adj.size() / 2;
  return m;
}

bool MultiLayerGraph::has_edge(int layer, VertexId u, VertexId v) const {
  auto nb = neighbors(layer, u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<VertexId> MultiLayerGraph::find_vertex(std::string_view external) const {
  for (std::size_t i = 0; i < external_ids_.size(); ++i) {
    if (external_ids_[i] == external) return static_cast<VertexId>(i);
  }
  return std::nullopt;
}

void MultiLayerGraph::build_union() {
  const std::size_t n = num_vertices();
  union_offsets_.assign(n + 1, 0);
  union_adj_.clear();
  union_mask_.clear();
  std::vector<std::pair<VertexId, int>> scratch;
  for (VertexId v = 0; v < n; ++v) {
    scratch.clear();
    for (int i = 0; i < num_layers(); ++i) {
      for (VertexId u : neighbors(i, v)) scratch.emplace_back(u, i);
    }
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t a = 0; a < scratch.size();) {
      std::uint64_t mask = 0;
      std::size_t b = a;
      for (; b < scratch.size() && scratch[b].first == scratch[a].first; ++b) {
        mask |= std::uint64_t{1} << scratch[b].second;
      }
      union_adj_.push_back(scratch[a].first);
      union_mask_.push_back(mask);
      a = b;
    }
    union_offsets_[v + 1] = union_adj_.size();
  }
}

MultiLayerGraph MultiLayerGraph::induced(std::span<const VertexId> subset) const {
  const std::size_t n = num_vertices();
  std::vector<VertexId> remap(n, kNone);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    VertexId v = subset[i];
    if (v >= n) throw Error("induced: vertex " + std::to_string(v) + " out of range");
    if (i > 0 && subset[i - 1] >= v) throw Error("induced: vertex subset must be sorted and unique");
    remap[v] = static_cast<VertexId>(i);
  }
  MultiLayerGraph out;
  out.external_ids_.reserve(subset.size());
  for (VertexId v : subset) out.external_ids_.push_back(external_ids_[v]);
  out.layers_.resize(layers_.size());
  for (int i = 0; i < num_layers(); ++i) {
    Csr& c = out.layers_[i];
    c.offsets.assign(subset.size() + 1, 0);
    for (std::size_t a = 0; a < subset.size(); ++a) {
      for (VertexId u : neighbors(i, subset[a])) {
        if (remap[u] != kNone) c.adj.push_back(remap[u]);
      }
      c.offsets[a + 1] = c.adj.size();
    }
  }
  out.build_union();
  return out;
}

MultiLayerGraph MultiLayerGraph::with_layer_order(std::span<const int> order) const {
  std::vector<bool> seen(layers_.size(), false);
  for (int o : order) {
    if (o < 0 || o >= num_layers() || seen[o]) throw Error("layer order must list distinct existing layers");
    seen[o] = true;
  }
  MultiLayerGraph out;
  out.external_ids_ = external_ids_;
  out.layers_.reserve(order.size());
  for (int o : order) out.layers_.push_back(layers_[o]);
  out.build_union();
  return out;
}

// ---------------------------------------------------------------------------
// GraphBuilder

GraphBuilder::GraphBuilder(int num_layers) : num_layers_(0) { grow_layers(num_layers); }

void GraphBuilder::grow_layers(int num_layers) {
  if (num_layers < 0 || num_layers > LayerSet::kMaxLayers) {
    throw Error("layer count " + std::to_string(num_layers) + " outside 0.." +
                std::to_string(LayerSet::kMaxLayers));
  }
  if (num_layers > num_layers_) {
    num_layers_ = num_layers;
    edges_.resize(num_layers);
  }
}

VertexId GraphBuilder::vertex(std::string_view external) {
  auto it = lookup_.find(std::string(external));
  if (it != lookup_.end()) return it->second;
  auto id = static_cast<VertexId>(ids_.size());
  ids_.emplace_back(external);
  lookup_.emplace(ids_.back(), id);
  return id;
}

void GraphBuilder::add_numbered_vertices(std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) vertex(std::to_string(i));
}

void GraphBuilder::add_edge(int layer, VertexId u, VertexId v) {
  if (layer < 0 || layer >= num_layers_) throw Error("layer " + std::to_string(layer + 1) + " out of range");
  if (u >= ids_.size() || v >= ids_.size()) throw Error("edge endpoint out of range");
  if (u == v) {
    ++self_loops_;
    return;
  }
  edges_[layer].emplace_back(std::min(u, v), std::max(u, v));
}

MultiLayerGraph GraphBuilder::build() {
  MultiLayerGraph g;
  const std::size_t n = ids_.size();
  g.external_ids_ = ids_;
  g.layers_.resize(num_layers_);
  for (int i = 0; i < num_layers_; ++i) {
    auto& list = edges_[i];
    std::sort(list.begin(), list.end());
    auto last = std::unique(list.begin(), list.end());
    duplicates_ += static_cast<std::size_t>(list.end() - last);
    list.erase(last, list.end());

    MultiLayerGraph::Csr& c = g.layers_[i];
    c.offsets.assign(n + 1, 0);
    for (auto [u, v] : list) {
      ++c.offsets[u + 1];
      ++c.offsets[v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) c.offsets[v + 1] += c.offsets[v];
    c.adj.resize(c.offsets[n]);
    std::vector<std::size_t> fill(c.offsets.begin(), c.offsets.end() - 1);
    for (auto [u, v] : list) {
      c.adj[fill[u]++] = v;
      c.adj[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(c.adj.begin() + static_cast<std::ptrdiff_t>(c.offsets[v]),
                c.adj.begin() + static_cast<std::ptrdiff_t>(c.offsets[v + 1]));
    }
  }
  g.build_union();
  return g;
}

// ---------------------------------------------------------------------------
// Loaders

MultiLayerGraph load_triples(std::istream& in, LoadReport* report) {
  GraphBuilder builder(0);
  int declared = -1;
  bool seen_data = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      if (seen_data) continue;
      std::string_view directive = trim(body.substr(1));
      int value = 0;
      std::size_t count = 0;
      if (directive.starts_with("layers=")) {
        if (!parse_number(directive.substr(7), value) || value < 1) fail_line(line_no, "bad layers header");
        declared = value;
        builder.grow_layers(value);
      } else if (directive.starts_with("vertices=")) {
        if (!parse_number(directive.substr(9), count)) fail_line(line_no, "bad vertices header");
        builder.add_numbered_vertices(count);
      } else if (directive.starts_with("vertex ")) {
        auto tok = split_ws(directive.substr(7));
        if (tok.size() != 1) fail_line(line_no, "bad vertex declaration");
        builder.vertex(tok[0]);
      }
      continue;
    }
    seen_data = true;
    auto tok = split_ws(body);
    if (tok.size() != 3) fail_line(line_no, "expected '<layer> <u> <v>'");
    int layer = 0;
    if (!parse_number(tok[0], layer)) fail_line(line_no, "layer id '" + std::string(tok[0]) + "' is not an integer");
    if (layer < 1) fail_line(line_no, "layer id must be at least 1");
    if (declared > 0 && layer > declared) {
      fail_line(line_no, "layer " + std::to_string(layer) + " outside declared range 1.." + std::to_string(declared));
    }
    if (layer > LayerSet::kMaxLayers) {
      fail_line(line_no, "layer " + std::to_string(layer) + " exceeds the supported maximum of " +
                             std::to_string(LayerSet::kMaxLayers));
    }
    builder.grow_layers(layer);
    builder.add_edge(layer - 1, tok[1], tok[2]);
  }
  if (builder.num_vertices() == 0) throw Error("empty input: no vertices");
  MultiLayerGraph g = builder.build();
  if (builder.self_loops() + builder.duplicates() > 0) {
    spdlog::warn("dropped {} self-loops and {} duplicate edges", builder.self_loops(), builder.duplicates());
  }
  if (report) *report = {builder.self_loops(), builder.duplicates()};
  return g;
}

MultiLayerGraph load_triples_file(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_triples(in, report);
}

MultiLayerGraph load_layer_dir(const std::filesystem::path& dir, LoadReport* report) {
  if (!std::filesystem::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  static const std::regex name_re(R"(layer_([0-9]+)\.edges)");
  std::vector<std::pair<int, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, name_re)) continue;
    int layer = std::stoi(m[1].str());
    if (layer < 1 || layer > LayerSet::kMaxLayers) throw Error(name + ": layer id outside 1..64");
    files.emplace_back(layer, entry.path());
  }
  if (files.empty()) throw Error("empty input: no layer_<i>.edges files in " + dir.string());
  std::sort(files.begin(), files.end());
  GraphBuilder builder(files.back().first);
  for (const auto& [layer, path] : files) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view body = trim(line);
      if (body.empty() || body.front() == '#') continue;
      auto tok = split_ws(body);
      if (tok.size() != 2) {
        throw Error(path.filename().string() + ": line " + std::to_string(line_no) + ": expected '<u> <v>'");
      }
      builder.add_edge(layer - 1, tok[0], tok[1]);
    }
  }
  if (builder.num_vertices() == 0) throw Error("empty input: no vertices");
  MultiLayerGraph g = builder.build();
  if (builder.self_loops() + builder.duplicates() > 0) {
    spdlog::warn("dropped {} self-loops and {} duplicate edges", builder.self_loops(), builder.duplicates());
  }
  if (report) *report = {builder.self_loops(), builder.duplicates()};
  return g;
}

void write_triples(std::ostream& out, const MultiLayerGraph& g) {
  out << "# layers=" << g.num_layers() << '\n';
  bool numbered = true;
  for (std::size_t v = 0; v < g.num_vertices() && numbered; ++v) {
    numbered = g.external_id(static_cast<VertexId>(v)) == std::to_string(v);
  }
  if (numbered) {
    out << "# vertices=" << g.num_vertices() << '\n';
  } else {
    for (const std::string& id : g.external_ids()) out << "# vertex " << id << '\n';
  }
  for (int i = 0; i < g.num_layers(); ++i) {
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      for (VertexId v : g.neighbors(i, u)) {
        if (u < v) out << (i + 1) << ' ' << g.external_id(u) << ' ' << g.external_id(v) << '\n';
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Generators

namespace {

// Adds each pair u<v of [first,last) independently with probability p, skipping ahead
// geometrically so sparse layers cost O(edges) rather than O(pairs).
void add_random_pairs(GraphBuilder& b, int layer, VertexId first, VertexId last, double p, std::mt19937_64& rng) {
  if (p <= 0.0 || last - first < 2) return;
  std::geometric_distribution<std::uint64_t> skip_dist(p);
  VertexId u = first;
  std::uint64_t col = 0;  // offset within row u, whose pairs are (u, u+1..last-1)
  std::uint64_t skip = p >= 1.0 ? 0 : skip_dist(rng);
  for (;;) {
    while (u < last) {
      std::uint64_t row_len = last - u - 1;
      if (col + skip < row_len) break;
      skip -= row_len - col;
      col = 0;
      ++u;
    }
    if (u >= last) return;
    col += skip;
    b.add_edge(layer, u, static_cast<VertexId>(u + 1 + col));
    ++col;
    skip = p >= 1.0 ? 0 : skip_dist(rng);
  }
}

}  // namespace

MultiLayerGraph generate_planted(std::size_t n, int num_layers, const std::vector<PlantedBlock>& blocks,
                                 double background_p, std::uint64_t seed) {
  if (num_layers < 1 || num_layers > LayerSet::kMaxLayers) throw Error("layer count must be in 1..64");
  if (!(background_p >= 0.0 && background_p <= 1.0)) throw Error("background probability outside [0,1]");
  for (const PlantedBlock& blk : blocks) {
    if (!(blk.p >= 0.0 && blk.p <= 1.0)) throw Error("block probability outside [0,1]");
    if (blk.first >= blk.last || blk.last > n) {
      throw Error("block range [" + std::to_string(blk.first) + "," + std::to_string(blk.last) +
                  ") is empty or exceeds n=" + std::to_string(n));
    }
    if (blk.layers.empty() || !blk.layers.subset_of(LayerSet::all(num_layers))) {
      throw Error("block layer set " + blk.layers.to_string() + " is empty or out of range");
    }
  }
  std::mt19937_64 rng(seed);
  GraphBuilder b(num_layers);
  b.add_numbered_vertices(n);
  for (int i = 0; i < num_layers; ++i) {
    add_random_pairs(b, i, 0, static_cast<VertexId>(n), background_p, rng);
  }
  for (const PlantedBlock& blk : blocks) {
    for (int i : blk.layers.ids()) add_random_pairs(b, i, blk.first, blk.last, blk.p, rng);
  }
  return b.build();
}

std::vector<PlantedBlock> random_blocks(std::size_t n, int num_layers, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> size_dist(12, 40);
  std::uniform_int_distribution<int> width_dist(std::max(1, num_layers / 4), num_layers);
  std::uniform_real_distribution<double> p_dist(0.5, 0.9);
  std::bernoulli_distribution plant(0.5);
  std::vector<int> layer_ids(num_layers);
  for (int i = 0; i < num_layers; ++i) layer_ids[i] = i;

  std::vector<PlantedBlock> out;
  for (std::size_t start = 0; start < n;) {
    std::size_t last = std::min(n, start + size_dist(rng));
    if (plant(rng) && last - start >= 2) {
      std::shuffle(layer_ids.begin(), layer_ids.end(), rng);
      PlantedBlock blk;
      blk.first = static_cast<VertexId>(start);
      blk.last = static_cast<VertexId>(last);
      int width = width_dist(rng);
      for (int w = 0; w < width; ++w) blk.layers = blk.layers.with(layer_ids[w]);
      blk.p = p_dist(rng);
      out.push_back(blk);
    }
    start = last;
  }
  return out;
}

}  // namespace dccs
