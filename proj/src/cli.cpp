#include "pspt/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pspt/detail/rng.hpp"
#include "pspt/distributed.hpp"
#include "pspt/error.hpp"
#include "pspt/eval.hpp"
#include "pspt/gen.hpp"
#include "pspt/graph.hpp"
#include "pspt/index.hpp"
#include "pspt/kernels/intersect.hpp"
#include "pspt/oracle.hpp"
#include "pspt/query.hpp"

namespace pspt {
namespace {

using Clock = std::chrono::steady_clock;

int env_threads() {
  if (const char* env = std::getenv("PSPT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

double parse_alpha_token(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash != std::string::npos) {
    double num = std::stod(tok.substr(0, slash));
    double den = std::stod(tok.substr(slash + 1));
    if (den == 0.0) throw CLI::ValidationError("alphas", "division by zero");
    return num / den;
  }
  return std::stod(tok);
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    double a = parse_alpha_token(tok);
    if (!(a > 0.0)) throw CLI::ValidationError("alphas", "alpha must be > 0");
    out.push_back(a);
  }
  if (out.empty()) throw CLI::ValidationError("alphas", "empty alpha list");
  return out;
}

std::vector<std::pair<OrigId, OrigId>> load_pairs_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  std::vector<std::pair<OrigId, OrigId>> pairs;
  std::string line;
  uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::stringstream ss(line);
    std::string a, b;
    if (!(ss >> a)) continue;
    if (a[0] == '#') continue;
    if (!(ss >> b))
      raise(Errc::parse_error,
            "line " + std::to_string(lineno) + ": expected 'u v'");
    OrigId u = 0, v = 0;
    auto pu = std::from_chars(a.data(), a.data() + a.size(), u);
    auto pv = std::from_chars(b.data(), b.data() + b.size(), v);
    if (pu.ec != std::errc() || pv.ec != std::errc())
      raise(Errc::parse_error,
            "line " + std::to_string(lineno) + ": bad node id");
    pairs.emplace_back(u, v);
  }
  return pairs;
}

std::string path_to_string(const Path& p) {
  std::string s;
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(p.nodes[i]);
  }
  return s;
}

struct OutFile {
  std::ofstream file;
  std::ostream* stream;
  OutFile(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream = &fallback;
    } else {
      file.open(path);
      if (!file) raise(Errc::io_error, "cannot open " + path);
      stream = &file;
    }
  }
};

// ---- subcommands ----------------------------------------------------------

int cmd_build(const std::string& graph_path, double alpha,
              const std::string& out_path, int threads, std::ostream& out,
              std::ostream& err) {
  auto t0 = Clock::now();
  Graph g = load_edge_list_file(graph_path);
  if (g.self_loops_dropped)
    err << "warning: dropped " << g.self_loops_dropped << " self-loop(s)\n";
  if (g.duplicates_collapsed)
    err << "warning: collapsed " << g.duplicates_collapsed
        << " duplicate edge(s)\n";
  BuildOptions opts;
  opts.threads = threads > 0 ? threads : env_threads();
  Index idx = build_index(g, alpha, opts);
  auto t1 = Clock::now();
  save_index_file(idx, out_path);

  double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  uint64_t bytes = serialized_size(idx);
  out << "nodes,survivors,edges,alpha,beta,build_ms,ms_per_node,file_bytes,"
         "kb_per_node\n";
  out << g.node_count() << ',' << idx.roots.size() << ',' << g.edge_count()
      << ',' << fmt_double(alpha) << ',' << idx.beta << ','
      << fmt_double(ms) << ','
      << fmt_double(g.node_count() ? ms / g.node_count() : 0.0) << ',' << bytes
      << ','
      << fmt_double(g.node_count() ? bytes / 1024.0 / g.node_count() : 0.0)
      << '\n';
  return 0;
}

int cmd_query(const std::string& index_path, const std::string& graph_path,
              OrigId s, OrigId t, bool multi, uint64_t multi_k,
              std::ostream& out) {
  Index idx = load_index_file(index_path);
  Graph g = load_edge_list_file(graph_path);
  if (multi) {
    std::optional<uint64_t> cap;
    if (multi_k > 0) cap = multi_k;
    auto paths = query_multi(idx, g, s, t, cap);
    out << "rank,length,path\n";
    for (size_t i = 0; i < paths.size(); ++i)
      out << i + 1 << ',' << fmt_double(paths[i].length) << ','
          << path_to_string(paths[i]) << '\n';
    return 0;
  }
  QueryOutcome q = query(idx, g, s, t, true);
  out << "s,t,distance,resolution,meeting_node,path\n";
  out << s << ',' << t << ',';
  if (q.distance) out << fmt_double(*q.distance);
  out << ',' << resolution_name(q.resolution) << ',';
  if (q.meeting_node) out << *q.meeting_node;
  out << ',';
  if (q.path) out << path_to_string(*q.path);
  out << '\n';
  return 0;
}

int cmd_bench(const std::string& index_path, const std::string& graph_path,
              uint64_t pair_count, uint64_t seed, std::ostream& out) {
  Index idx = load_index_file(index_path);
  Graph g = load_edge_list_file(graph_path);
  if (g.node_count() < 2) raise(Errc::invalid_argument, "graph too small");

  detail::SplitMix64 rng(detail::splitmix64(seed ^ 0xbe9cull));
  std::vector<std::pair<OrigId, OrigId>> pairs;
  pairs.reserve(pair_count);
  for (uint64_t i = 0; i < pair_count; ++i) {
    NodeId s, t;
    do {
      s = static_cast<NodeId>(rng.below(g.node_count()));
      t = static_cast<NodeId>(rng.below(g.node_count()));
    } while (s == t);
    pairs.emplace_back(g.original_id(s), g.original_id(t));
  }

  // Warm pass, then timed passes.
  for (auto [s, t] : pairs) (void)query(idx, g, s, t, false);
  std::vector<double> engine_us, baseline_us;
  engine_us.reserve(pairs.size());
  baseline_us.reserve(pairs.size());
  for (auto [s, t] : pairs) {
    auto t0 = Clock::now();
    (void)query(idx, g, s, t, false);
    auto t1 = Clock::now();
    engine_us.push_back(
        std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  for (auto [s, t] : pairs) {
    NodeId sd = *g.dense_id(s), td = *g.dense_id(t);
    auto t0 = Clock::now();
    (void)bidirectional_search(g, sd, td);
    auto t1 = Clock::now();
    baseline_us.push_back(
        std::chrono::duration<double, std::micro>(t1 - t0).count());
  }

  double ep50 = eval::percentile(engine_us, 50);
  double bp50 = eval::percentile(baseline_us, 50);
  out << "pairs,seed,kernel,engine_p50_us,engine_p95_us,engine_p99_us,"
         "baseline_p50_us,baseline_p95_us,baseline_p99_us,median_speedup\n";
  out << pairs.size() << ',' << seed << ','
      << kernels::isa_name(kernels::active_isa()) << ','
      << fmt_double(ep50) << ',' << fmt_double(eval::percentile(engine_us, 95))
      << ',' << fmt_double(eval::percentile(engine_us, 99)) << ','
      << fmt_double(bp50) << ','
      << fmt_double(eval::percentile(baseline_us, 95)) << ','
      << fmt_double(eval::percentile(baseline_us, 99)) << ','
      << fmt_double(ep50 > 0 ? bp50 / ep50 : 0.0) << '\n';
  return 0;
}

int cmd_eval(const std::string& graph_path, const eval::EvalParams& params,
             const std::string& out_path, std::ostream& out) {
  Graph g = load_edge_list_file(graph_path);
  eval::EvalReport report = eval::run_eval(g, params);
  OutFile dest(out_path, out);
  eval::write_eval_csv(report, *dest.stream);
  return 0;
}

int cmd_gen(const std::string& model, uint64_t n, uint64_t m, double p,
            uint64_t rows, uint64_t cols, uint64_t seed,
            gen::WeightRange weights, const std::string& out_path) {
  EdgeList edges;
  if (model == "pa") {
    edges = gen::preferential_attachment(n, m, seed, weights);
  } else if (model == "er") {
    edges = gen::erdos_renyi(n, p, seed, weights);
  } else if (model == "line") {
    edges = gen::line(n, seed, weights);
  } else if (model == "grid") {
    edges = gen::grid(rows, cols, seed, weights);
  } else {
    raise(Errc::invalid_argument, "unknown model: " + model);
  }
  std::ofstream out(out_path);
  if (!out) raise(Errc::io_error, "cannot open " + out_path);
  gen::write_edge_list(edges, out, !weights.unit());
  out.flush();
  if (!out) raise(Errc::io_error, "write failed: " + out_path);
  return 0;
}

int cmd_batch(const std::string& index_path, const std::string& graph_path,
              const std::string& pairs_path, uint32_t machines, uint64_t seed,
              bool want_paths, uint64_t fan_in_cap,
              const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  Index idx = load_index_file(index_path);
  Graph g = load_edge_list_file(graph_path);
  auto pairs = load_pairs_file(pairs_path);
  ClusterPlan plan{machines, seed};
  BatchOptions opts;
  opts.want_paths = want_paths;
  opts.fan_in_cap = fan_in_cap;
  BatchRun run = batch_query_pairs(idx, g, pairs, plan, opts);
  OutFile dest(out_path, out);
  write_results_csv(run, *dest.stream);
  write_accounting_csv(run, err);  // varies with machine count by design
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"partial shortest path tree query engine"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "preprocess a graph into an index");
  std::string b_graph, b_out;
  double b_alpha = 4.0;
  int b_threads = 0;
  build->add_option("graph", b_graph, "edge-list file")->required();
  build->add_option("--alpha", b_alpha, "block scale factor")
      ->check(CLI::PositiveNumber);
  build->add_option("-o,--out", b_out, "output index file")->required();
  build->add_option("--threads", b_threads, "build threads (0 = auto)");

  // query
  auto* qry = app.add_subcommand("query", "single-pair query");
  std::string q_index, q_graph;
  OrigId q_s = 0, q_t = 0;
  uint64_t q_multi_k = 0;
  qry->add_option("index", q_index)->required();
  qry->add_option("graph", q_graph)->required();
  qry->add_option("s", q_s)->required();
  qry->add_option("t", q_t)->required();
  auto* multi_opt =
      qry->add_option("--multi", q_multi_k,
                      "list multiple paths, optionally capped at K")
          ->expected(0, 1);

  // bench
  auto* bench = app.add_subcommand("bench", "latency percentiles vs baseline");
  std::string be_index, be_graph;
  uint64_t be_pairs = 10000, be_seed = 1;
  bench->add_option("index", be_index)->required();
  bench->add_option("graph", be_graph)->required();
  bench->add_option("--pairs", be_pairs)->check(CLI::PositiveNumber);
  bench->add_option("--seed", be_seed);

  // eval
  auto* ev = app.add_subcommand("eval", "intersection / accuracy experiments");
  std::string e_graph, e_alphas = "4", e_tie = "consistent", e_out;
  eval::EvalParams params;
  ev->add_option("graph", e_graph)->required();
  ev->add_option("--alphas", e_alphas,
                 "comma list, fractions allowed (1/16,1,4)");
  ev->add_option("--node-sample", params.node_sample)
      ->check(CLI::PositiveNumber);
  ev->add_option("--pairs-per-round", params.pairs_per_round)
      ->check(CLI::PositiveNumber);
  ev->add_option("--rounds", params.rounds)->check(CLI::PositiveNumber);
  ev->add_option("--seed", params.seed);
  ev->add_option("--tie-mode", e_tie)
      ->check(CLI::IsMember({"consistent", "arbitrary"}));
  ev->add_option("--threads", params.threads);
  bool e_no_latency = false;
  ev->add_flag("--no-latency", e_no_latency,
               "skip timing for byte-reproducible output");
  ev->add_option("-o,--out", e_out, "output CSV (default stdout)");

  // gen
  auto* gn = app.add_subcommand("gen", "synthetic graph generator");
  std::string g_model, g_out;
  uint64_t g_n = 1000, g_m = 5, g_rows = 10, g_cols = 10, g_seed = 1;
  double g_p = 0.01;
  gen::WeightRange g_weights;
  gn->add_option("model", g_model, "pa | er | line | grid")
      ->required()
      ->check(CLI::IsMember({"pa", "er", "line", "grid"}));
  gn->add_option("--n", g_n, "node count (pa, er, line)");
  gn->add_option("--m", g_m, "edges per arriving node (pa)");
  gn->add_option("--p", g_p, "edge probability (er)");
  gn->add_option("--rows", g_rows, "grid rows");
  gn->add_option("--cols", g_cols, "grid cols");
  gn->add_option("--seed", g_seed);
  gn->add_option("--wmin", g_weights.lo, "min integer weight");
  gn->add_option("--wmax", g_weights.hi, "max integer weight");
  gn->add_option("-o,--out", g_out, "output edge-list file")->required();

  // batch
  auto* ba = app.add_subcommand("batch", "distributed batch queries");
  std::string ba_index, ba_graph, ba_pairs, ba_out;
  uint32_t ba_machines = 4;
  uint64_t ba_seed = 0, ba_cap = 10000;
  bool ba_paths = false;
  ba->add_option("index", ba_index)->required();
  ba->add_option("graph", ba_graph)->required();
  ba->add_option("pairs", ba_pairs, "file of 'u v' lines")->required();
  ba->add_option("--machines", ba_machines)->check(CLI::PositiveNumber);
  ba->add_option("--seed", ba_seed);
  ba->add_flag("--paths", ba_paths, "retrieve paths too");
  ba->add_option("--fan-in-cap", ba_cap)->check(CLI::PositiveNumber);
  ba->add_option("-o,--out", ba_out, "results CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (build->parsed())
      return cmd_build(b_graph, b_alpha, b_out, b_threads, out, err);
    if (qry->parsed())
      return cmd_query(q_index, q_graph, q_s, q_t, multi_opt->count() > 0,
                       q_multi_k, out);
    if (bench->parsed()) return cmd_bench(be_index, be_graph, be_pairs,
                                          be_seed, out);
    if (ev->parsed()) {
      params.alphas = parse_alpha_list(e_alphas);
      params.tie_mode = e_tie == "arbitrary" ? eval::TieMode::arbitrary
                                             : eval::TieMode::consistent;
      params.measure_latency = !e_no_latency;
      if (params.threads <= 0) params.threads = env_threads();
      return cmd_eval(e_graph, params, e_out, out);
    }
    if (gn->parsed())
      return cmd_gen(g_model, g_n, g_m, g_p, g_rows, g_cols, g_seed,
                     g_weights, g_out);
    if (ba->parsed())
      return cmd_batch(ba_index, ba_graph, ba_pairs, ba_machines, ba_seed,
                       ba_paths, ba_cap, ba_out, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pspt
