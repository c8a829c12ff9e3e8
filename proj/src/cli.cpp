#include "dccs/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dccs/bottomup.hpp"
#include "dccs/greedy.hpp"
#include "dccs/oracle.hpp"
#include "dccs/topdown.hpp"

namespace dccs::cli {

namespace {

using Json = nlohmann::ordered_json;

void configure_logging() {
  auto logger = spdlog::get("dccs");
  if (!logger) {
    logger = spdlog::stderr_color_mt("dccs");
    spdlog::set_default_logger(logger);
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("DCCS_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

MultiLayerGraph load_graph(const std::string& path, const std::string& format) {
  LoadReport report;
  MultiLayerGraph g = format == "dir" ? load_layer_dir(path, &report) : load_triples_file(path, &report);
  spdlog::info("loaded {} vertices, {} layers, {} edges", g.num_vertices(), g.num_layers(), g.total_edges());
  return g;
}

struct Outcome {
  std::vector<CoherentCore> cores;
  std::size_t cover = 0;
  SearchStats stats;
};

std::string resolve_algo(const std::string& algo, int s, int l) {
  if (algo != "auto") return algo;
  return 2 * s < l ? "bu" : "td";
}

Outcome run_algo(const std::string& algo, const MultiLayerGraph& g, const SearchParams& params,
                 const SearchOptions& options) {
  if (algo == "exact") {
    params.validate(g.num_layers());
    oracle::ExactResult ex = oracle::exact_dccs(g, params.d, params.s, params.k);
    Outcome out;
    out.cores = ex.cores;
    out.cover = ex.opt;
    out.stats.candidates = ex.candidates.size();
    out.stats.dcc_calls = ex.candidates.size();
    return out;
  }
  SearchResult r;
  if (algo == "greedy") {
    r = gd_dccs(g, params, options);
  } else if (algo == "bu") {
    r = bu_dccs(g, params, options);
  } else if (algo == "td") {
    r = td_dccs(g, params, options);
  } else {
    throw Error("unknown algorithm '" + algo + "'");
  }
  return {std::move(r.cores), r.cover, std::move(r.stats)};
}

Json counters_json(const SearchStats& st, bool audit) {
  Json c;
  c["candidates"] = st.candidates;
  c["init_candidates"] = st.init_candidates;
  c["dcc_calls"] = st.dcc_calls;
  c["nodes"] = st.nodes;
  c["inserted"] = st.inserted;
  c["replaced"] = st.replaced;
  c["rejected"] = st.rejected;
  c["pruned_bu_subtree"] = st.pruned_bu_subtree;
  c["pruned_bu_order"] = st.pruned_bu_order;
  c["pruned_bu_layers"] = st.pruned_bu_layers;
  c["pruned_td_potential"] = st.pruned_td_potential;
  c["pruned_td_order"] = st.pruned_td_order;
  c["single_updates"] = st.single_updates;
  c["refine_u_calls"] = st.refine_u_calls;
  c["refine_c_calls"] = st.refine_c_calls;
  c["refine_c_touches"] = st.refine_c_touches;
  c["preprocess_rounds"] = st.preprocess_rounds;
  c["preprocess_removed"] = st.preprocess_removed;
  if (audit) {
    c["audit_checks"] = st.audit_checks;
    c["audit_violations"] = st.audit_violations;
    c["audit_messages"] = st.audit_messages;
  }
  return c;
}

Json cores_json(const MultiLayerGraph& g, std::vector<CoherentCore> cores) {
  std::sort(cores.begin(), cores.end(), [](const CoherentCore& a, const CoherentCore& b) {
    if (a.layers != b.layers) return lex_less(a.layers, b.layers);
    return a.vertices < b.vertices;
  });
  Json out = Json::array();
  for (const CoherentCore& c : cores) {
    std::vector<int> layers;
    for (int i : c.layers.ids()) layers.push_back(i + 1);
    std::vector<std::string> names;
    names.reserve(c.vertices.size());
    for (VertexId v : c.vertices) names.push_back(g.external_id(v));
    std::sort(names.begin(), names.end(), external_less);
    Json entry;
    entry["layers"] = layers;
    entry["size"] = c.vertices.size();
    entry["vertices"] = names;
    out.push_back(entry);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path);
  file << text;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string input;
  std::string format = "triples";
  std::string algo = "auto";
  SearchParams params;
  bool no_prune = false;
  bool no_preprocess = false;
  bool no_init = false;
  bool no_sort = false;
  bool audit = false;
  std::string descendant = "first";
  std::string json_path;
  bool stats = false;
};

SearchOptions options_from(const RunArgs& a) {
  SearchOptions o;
  if (a.no_prune) o.disable_pruning();
  o.preprocess = !a.no_preprocess;
  o.init_topk = !a.no_init;
  o.sort_layers = !a.no_sort;
  o.audit = a.audit;
  o.descendant = a.descendant == "random" ? DescendantPolicy::kRandom : DescendantPolicy::kFirst;
  return o;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  MultiLayerGraph g = load_graph(a.input, a.format);
  a.params.validate(g.num_layers());
  const std::string algo = resolve_algo(a.algo, a.params.s, g.num_layers());
  if (algo == "bu" && 2 * a.params.s >= g.num_layers()) {
    spdlog::info("bottom-up search with s >= l/2; top-down is usually faster here");
  }

  auto start = std::chrono::steady_clock::now();
  Outcome r = run_algo(algo, g, a.params, options_from(a));
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  Json doc;
  doc["algo"] = algo;
  doc["params"] = {{"d", a.params.d}, {"s", a.params.s}, {"k", a.params.k}, {"seed", a.params.seed}};
  doc["options"] = {{"prune", !a.no_prune},
                    {"preprocess", !a.no_preprocess},
                    {"init", !a.no_init},
                    {"sort", !a.no_sort},
                    {"descendant", a.descendant}};
  doc["graph"] = {{"vertices", g.num_vertices()}, {"layers", g.num_layers()}, {"edges", g.total_edges()}};
  doc["cores"] = cores_json(g, r.cores);
  doc["cover_size"] = r.cover;
  doc["counters"] = counters_json(r.stats, a.audit);
  if (a.stats) doc["runtime_ms"] = ms;
  write_text(a.json_path, doc.dump(2) + "\n", out);
  if (a.audit && r.stats.audit_violations > 0) {
    spdlog::error("{} audit violations", r.stats.audit_violations);
    return kUsageError;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string input;
  std::string format = "triples";
  std::size_t n = 2000;
  int l = 8;
  double background = -1.0;
  std::string vary = "k";
  std::optional<std::string> values;
  std::string algos = "greedy,bu,td";
  SearchParams params;
  std::string out_path;
  std::string out_format;
};

std::vector<double> default_values(const std::string& vary, int l) {
  if (vary == "k") return {5, 10, 15, 20, 25};
  if (vary == "d") return {2, 3, 4, 5, 6};
  if (vary == "s") return {1, 2, 3, 4, 5};
  if (vary == "s-large") {
    std::vector<double> v;
    for (int s = l - 4; s <= l; ++s) {
      if (s >= 1) v.push_back(s);
    }
    return v;
  }
  return {0.2, 0.4, 0.6, 0.8, 1.0};
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error("bad sweep value '" + part + "'");
    }
  }
  return out;
}

MultiLayerGraph sample_vertices(const MultiLayerGraph& g, double p, std::uint64_t seed) {
  std::vector<VertexId> ids(g.num_vertices());
  std::iota(ids.begin(), ids.end(), VertexId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(std::llround(p * static_cast<double>(ids.size()))));
  std::sort(ids.begin(), ids.end());
  return g.induced(ids);
}

MultiLayerGraph sample_layers(const MultiLayerGraph& g, double q, std::uint64_t seed) {
  std::vector<int> layers(g.num_layers());
  std::iota(layers.begin(), layers.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(layers.begin(), layers.end(), rng);
  auto keep = std::max<long long>(1, std::llround(q * g.num_layers()));
  layers.resize(static_cast<std::size_t>(keep));
  std::sort(layers.begin(), layers.end());
  return g.with_layer_order(layers);
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  MultiLayerGraph base;
  if (!a.input.empty()) {
    base = load_graph(a.input, a.format);
  } else {
    double bg = a.background >= 0 ? a.background : std::min(1.0, 2.0 / static_cast<double>(std::max<std::size_t>(a.n, 1)));
    base = generate_planted(a.n, a.l, random_blocks(a.n, a.l, a.params.seed), bg, a.params.seed);
  }
  std::vector<double> values = a.values ? parse_values(*a.values) : default_values(a.vary, base.num_layers());
  if (values.empty()) throw Error("the sweep has no values");
  std::vector<std::string> algos = split(a.algos, ',');
  if (algos.empty()) throw Error("no algorithms selected");
  for (const std::string& name : algos) {
    if (name != "greedy" && name != "bu" && name != "td" && name != "exact" && name != "auto") {
      throw Error("unknown algorithm '" + name + "'");
    }
  }
  const bool integral = a.vary == "k" || a.vary == "d" || a.vary == "s" || a.vary == "s-large";
  for (double v : values) {
    if (integral && (v != std::floor(v) || v < 0)) throw Error("sweep over " + a.vary + " needs whole numbers");
    if (!integral && (v <= 0 || v > 1)) throw Error("sweep over " + a.vary + " needs fractions in (0,1]");
  }

  Json rows = Json::array();
  for (double v : values) {
    SearchParams params = a.params;
    const MultiLayerGraph* g = &base;
    MultiLayerGraph sampled;
    if (a.vary == "k") params.k = static_cast<int>(v);
    if (a.vary == "d") params.d = static_cast<int>(v);
    if (a.vary == "s" || a.vary == "s-large") params.s = static_cast<int>(v);
    if (a.vary == "p") {
      sampled = sample_vertices(base, v, params.seed);
      g = &sampled;
    }
    if (a.vary == "q") {
      sampled = sample_layers(base, v, params.seed);
      g = &sampled;
    }
    for (const std::string& name : algos) {
      Json row;
      row["vary"] = a.vary;
      row["value"] = v;
      row["algo"] = name;
      row["vertices"] = g->num_vertices();
      row["layers"] = g->num_layers();
      try {
        params.validate(g->num_layers());
        const std::string algo = resolve_algo(name, params.s, g->num_layers());
        auto start = std::chrono::steady_clock::now();
        Outcome r = run_algo(algo, *g, params, SearchOptions{});
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        row["status"] = "ok";
        row["cover_size"] = r.cover;
        row["runtime_ms"] = ms;
        row["candidates"] = r.stats.candidates;
        row["dcc_calls"] = r.stats.dcc_calls;
        row["nodes"] = r.stats.nodes;
      } catch (const oracle::TooLarge&) {
        row["status"] = "too_large";
      } catch (const Error& e) {
        row["status"] = "skipped";
        spdlog::warn("{}={} {}: {}", a.vary, v, name, e.what());
      }
      rows.push_back(row);
    }
  }

  std::string format = a.out_format;
  if (format.empty()) {
    format = a.out_path.size() >= 5 && a.out_path.substr(a.out_path.size() - 5) == ".json" ? "json" : "csv";
  }
  std::ostringstream text;
  if (format == "json") {
    text << rows.dump(2) << "\n";
  } else {
    const std::vector<std::string> columns = {"vary",   "value",     "algo",       "vertices",  "layers",
                                              "status", "cover_size", "runtime_ms", "candidates", "dcc_calls",
                                              "nodes"};
    for (std::size_t i = 0; i < columns.size(); ++i) text << (i ? "," : "") << columns[i];
    text << "\n";
    for (const Json& row : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text << ',';
        const auto it = row.find(columns[i]);
        if (it == row.end()) continue;
        if (it->is_string()) {
          text << it->get<std::string>();
        } else if (columns[i] == "runtime_ms") {
          text << std::fixed << std::setprecision(3) << it->get<double>() << std::defaultfloat;
        } else {
          text << it->dump();
        }
      }
      text << "\n";
    }
  }
  write_text(a.out_path, text.str(), out);
  return kOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::size_t n = 0;
  int l = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> blocks;
  double background = -1.0;
  std::string out_path;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  std::vector<PlantedBlock> blocks;
  for (const std::string& b : a.blocks) blocks.push_back(parse_block(b));
  if (a.blocks.empty()) blocks = random_blocks(a.n, a.l, a.seed);
  double bg = a.background >= 0 ? a.background : std::min(1.0, 2.0 / static_cast<double>(std::max<std::size_t>(a.n, 1)));
  MultiLayerGraph g = generate_planted(a.n, a.l, blocks, bg, a.seed);
  std::ostringstream text;
  write_triples(text, g);
  write_text(a.out_path, text.str(), out);
  return kOk;
}

}  // namespace

bool external_less(const std::string& a, const std::string& b) {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na != nb) return na;
  if (na) {
    std::size_t za = a.find_first_not_of('0');
    std::size_t zb = b.find_first_not_of('0');
    std::string_view ta = za == std::string::npos ? std::string_view() : std::string_view(a).substr(za);
    std::string_view tb = zb == std::string::npos ? std::string_view() : std::string_view(b).substr(zb);
    if (ta.size() != tb.size()) return ta.size() < tb.size();
    if (ta != tb) return ta < tb;
  }
  return a < b;
}

PlantedBlock parse_block(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 4) throw Error("block '" + text + "' is not first:last:layers:p");
  PlantedBlock b;
  try {
    std::size_t used = 0;
    b.first = static_cast<VertexId>(std::stoul(parts[0], &used));
    if (used != parts[0].size()) throw Error("");
    b.last = static_cast<VertexId>(std::stoul(parts[1], &used));
    if (used != parts[1].size()) throw Error("");
    for (const std::string& layer : split(parts[2], ',')) {
      int id = std::stoi(layer, &used);
      if (used != layer.size() || id < 1 || id > LayerSet::kMaxLayers) throw Error("");
      b.layers = b.layers.with(id - 1);
    }
    b.p = std::stod(parts[3], &used);
    if (used != parts[3].size()) throw Error("");
  } catch (const std::exception&) {
    throw Error("block '" + text + "' is not first:last:layers:p");
  }
  return b;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Diversified d-coherent core search on multi-layer graphs", "dccs"};
  app.require_subcommand(1);

  RunArgs ra;
  CLI::App* run_cmd = app.add_subcommand("run", "Search one graph and print the result as JSON");
  run_cmd->add_option("--input", ra.input, "Edge list file or layer directory")->required();
  run_cmd->add_option("--format", ra.format, "Input format")->check(CLI::IsMember({"triples", "dir"}));
  run_cmd->add_option("--algo", ra.algo, "Search algorithm")
      ->check(CLI::IsMember({"greedy", "bu", "td", "exact", "auto"}));
  run_cmd->add_option("--d", ra.params.d, "Minimum degree on every chosen layer");
  run_cmd->add_option("--s", ra.params.s, "Number of layers per core");
  run_cmd->add_option("--k", ra.params.k, "Number of cores");
  run_cmd->add_option("--seed", ra.params.seed, "Seed for randomized choices");
  run_cmd->add_flag("--no-prune", ra.no_prune, "Disable every pruning rule");
  run_cmd->add_flag("--no-preprocess", ra.no_preprocess, "Skip vertex deletion");
  run_cmd->add_flag("--no-init", ra.no_init, "Start from an empty result set");
  run_cmd->add_flag("--no-sort", ra.no_sort, "Keep the input layer order");
  run_cmd->add_flag("--audit", ra.audit, "Re-check every pruning and refinement step (slow)");
  run_cmd->add_option("--descendant", ra.descendant, "Descendant reported by a top-down single update")
      ->check(CLI::IsMember({"first", "random"}));
  run_cmd->add_option("--json", ra.json_path, "Write the JSON here instead of stdout");
  run_cmd->add_flag("--stats", ra.stats, "Include wall-clock time");

  BenchArgs ba;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Sweep one parameter and report time and cover per algorithm");
  bench_cmd->add_option("--input", ba.input, "Edge list file or layer directory; generated when absent");
  bench_cmd->add_option("--format", ba.format, "Input format")->check(CLI::IsMember({"triples", "dir"}));
  bench_cmd->add_option("--n", ba.n, "Generated vertex count");
  bench_cmd->add_option("--l", ba.l, "Generated layer count");
  bench_cmd->add_option("--background", ba.background, "Generated background edge probability");
  bench_cmd->add_option("--vary", ba.vary, "Parameter to sweep")
      ->check(CLI::IsMember({"k", "d", "s", "s-large", "p", "q"}));
  bench_cmd->add_option("--values", ba.values, "Comma-separated sweep values");
  bench_cmd->add_option("--algos", ba.algos, "Comma-separated algorithms");
  bench_cmd->add_option("--d", ba.params.d, "Minimum degree");
  bench_cmd->add_option("--s", ba.params.s, "Number of layers per core");
  bench_cmd->add_option("--k", ba.params.k, "Number of cores");
  bench_cmd->add_option("--seed", ba.params.seed, "Seed for generation, sampling and search");
  bench_cmd->add_option("--out", ba.out_path, "Output file; stdout when absent");
  bench_cmd->add_option("--out-format", ba.out_format, "csv or json; inferred from --out")
      ->check(CLI::IsMember({"csv", "json"}));

  GenArgs ga;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a planted-block graph as an edge list");
  gen_cmd->add_option("--n", ga.n, "Vertex count")->required();
  gen_cmd->add_option("--l", ga.l, "Layer count")->required();
  gen_cmd->add_option("--seed", ga.seed, "Generator seed");
  gen_cmd->add_option("--block", ga.blocks, "first:last:layers:p, repeatable; random blocks when absent");
  gen_cmd->add_option("--background", ga.background, "Background edge probability (default 2/n)");
  gen_cmd->add_option("--out", ga.out_path, "Output file; stdout when absent");

  std::vector<const char*> argv;
  argv.push_back("dccs");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(ra, out);
    if (bench_cmd->parsed()) return cmd_bench(ba, out);
    return cmd_gen(ga, out);
  } catch (const oracle::TooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kTooLarge;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace dccs::cli
