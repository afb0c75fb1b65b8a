#include "pspt/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "pspt/detail/rng.hpp"
#include "pspt/error.hpp"
#include "pspt/oracle.hpp"

namespace pspt::eval {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::micro>(t1 - t0).count();
}

}  // namespace

std::vector<std::pair<OrigId, OrigId>> sample_eval_pairs(
    const Graph& g, uint32_t node_sample, uint32_t pairs_per_round,
    uint32_t rounds, uint64_t seed) {
  const uint32_t n = g.node_count();
  if (n < 2) raise(Errc::invalid_argument, "need at least two nodes");
  std::vector<std::pair<OrigId, OrigId>> pairs;
  pairs.reserve(static_cast<size_t>(pairs_per_round) * rounds);
  for (uint32_t r = 0; r < rounds; ++r) {
    detail::SplitMix64 rng(detail::splitmix64(seed) ^
                           detail::splitmix64(r + 1));
    uint32_t k = std::min(node_sample, n);
    std::vector<NodeId> sample;
    if (k == n) {
      sample.resize(n);
      std::iota(sample.begin(), sample.end(), 0u);
    } else {
      std::vector<uint8_t> taken(n, 0);
      sample.reserve(k);
      while (sample.size() < k) {
        NodeId u = static_cast<NodeId>(rng.below(n));
        if (taken[u]) continue;
        taken[u] = 1;
        sample.push_back(u);
      }
    }
    if (sample.size() < 2) raise(Errc::invalid_argument, "sample too small");
    for (uint32_t i = 0; i < pairs_per_round; ++i) {
      NodeId s, t;
      do {
        s = sample[rng.below(sample.size())];
        t = sample[rng.below(sample.size())];
      } while (s == t);
      pairs.emplace_back(g.original_id(s), g.original_id(t));
    }
  }
  return pairs;
}

std::vector<uint32_t> arbitrary_tie_perm(uint32_t n, uint64_t seed) {
  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  detail::SplitMix64 rng(detail::splitmix64(seed ^ 0x7ae2d9b3u));
  for (uint32_t i = n; i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

WmaxCache::WmaxCache(const Index& idx, const Graph& g)
    : idx_(idx), g_(g), cache_(idx.roots.size(), -1.0) {}

double WmaxCache::for_core(NodeId core) {
  uint32_t b = idx_.block_idx[core];
  if (cache_[b] >= 0.0) return cache_[b];
  double wmax = 0.0;
  BlockView blk = idx_.block_at(b);
  for (NodeId m : blk.members)
    for (double w : g_.weights(m)) wmax = std::max(wmax, w);
  cache_[b] = wmax;
  return wmax;
}

namespace {

// Mirrors the query engine's endpoint redirection; kept separate so the
// along-shortest-path predicate is an independent route over the blocks.
struct Core {
  bool ok = false;
  NodeId core = kNoNode;
  double extra = 0.0;
};

Core core_of(const Index& idx, NodeId u) {
  Core c;
  if (idx.pruned.tag[u] == NodeClass::survivor) {
    c.ok = true;
    c.core = u;
  } else if (idx.pruned.tag[u] == NodeClass::redirected) {
    NodeId a = idx.pruned.anchor[u];
    if (idx.pruned.tag[a] == NodeClass::survivor) {
      c.ok = true;
      c.core = a;
      c.extra = idx.pruned.anchor_weight[u];
    }
  }
  return c;
}

}  // namespace

PairClass classify_pair(const Index& idx, const Graph& g, OrigId s, OrigId t,
                        std::optional<double> oracle_distance,
                        WmaxCache& wmax) {
  PairClass pc;
  QueryOutcome out = query(idx, g, s, t, false);
  pc.resolution = out.resolution;
  pc.engine_distance = out.distance;
  pc.disconnected = !oracle_distance.has_value();
  if (out.resolution != Resolution::intersection) return pc;

  pc.intersecting = true;
  if (!oracle_distance) return pc;  // cannot happen: shared block member

  double engine = *out.distance;
  double oracle = *oracle_distance;
  pc.exact = engine == oracle;

  NodeId sd = *idx.dense_id(s), td = *idx.dense_id(t);
  Core cs = core_of(idx, sd), ct = core_of(idx, td);
  pc.within_bound = engine <= oracle + wmax.for_core(cs.core);

  double extra = cs.extra + ct.extra;
  for (const Candidate& c : intersect(idx.block(cs.core), idx.block(ct.core)))
    if (extra + (c.dist_a + c.dist_b) == oracle) {
      pc.along_sp = true;
      break;
    }
  return pc;
}

EvalReport run_eval(const Graph& g, const EvalParams& params) {
  if (params.alphas.empty())
    raise(Errc::invalid_argument, "need at least one alpha");
  for (double a : params.alphas)
    if (!(a > 0.0)) raise(Errc::invalid_argument, "alpha must be > 0");

  EvalReport report;
  report.params = params;
  report.node_count = g.node_count();

  auto pairs = sample_eval_pairs(g, params.node_sample, params.pairs_per_round,
                                 params.rounds, params.seed);

  // Oracle pass, shared across alphas; doubles as the baseline timing.
  std::map<std::pair<OrigId, OrigId>, std::optional<double>> oracle;
  std::vector<double> baseline_us;
  baseline_us.reserve(pairs.size());
  for (auto [s, t] : pairs) {
    auto key = std::make_pair(s, t);
    if (oracle.count(key)) continue;
    NodeId sd = *g.dense_id(s), td = *g.dense_id(t);
    auto t0 = Clock::now();
    BidirResult br = bidirectional_search(g, sd, td);
    auto t1 = Clock::now();
    if (params.measure_latency) baseline_us.push_back(elapsed_us(t0, t1));
    oracle.emplace(key, br.distance);
  }

  std::vector<uint32_t> perm;
  const std::vector<uint32_t>* tie_perm = nullptr;
  if (params.tie_mode == TieMode::arbitrary) {
    perm = arbitrary_tie_perm(g.node_count(), params.seed);
    tie_perm = &perm;
  }

  for (double alpha : params.alphas) {
    BuildOptions opts;
    opts.threads = params.threads;
    opts.tie_perm = tie_perm;
    Index idx = build_index(g, alpha, opts);
    WmaxCache wmax(idx, g);

    EvalRow row;
    row.alpha = alpha;
    row.beta = idx.beta;
    row.pairs = pairs.size();

    std::vector<double> engine_us;
    if (params.measure_latency) engine_us.reserve(pairs.size());
    for (auto [s, t] : pairs) {
      if (params.measure_latency) {
        auto t0 = Clock::now();
        QueryOutcome out = query(idx, g, s, t, false);
        auto t1 = Clock::now();
        (void)out;
        engine_us.push_back(elapsed_us(t0, t1));
      }
      PairClass pc =
          classify_pair(idx, g, s, t, oracle.at({s, t}), wmax);
      row.disconnected += pc.disconnected;
      row.intersecting += pc.intersecting;
      row.along_sp += pc.along_sp;
      row.exact += pc.exact;
      row.within_bound += pc.within_bound;
      row.fallback += pc.resolution == Resolution::fallback;
    }
    if (params.measure_latency) {
      row.engine_p50_us = percentile(engine_us, 50);
      row.engine_p95_us = percentile(engine_us, 95);
      row.engine_p99_us = percentile(engine_us, 99);
      row.baseline_p50_us = percentile(baseline_us, 50);
      row.baseline_p95_us = percentile(baseline_us, 95);
      row.baseline_p99_us = percentile(baseline_us, 99);
    }
    report.rows.push_back(row);
  }
  return report;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double rank = std::ceil(q / 100.0 * static_cast<double>(values.size()));
  size_t i = rank <= 1.0 ? 0 : static_cast<size_t>(rank) - 1;
  return values[std::min(i, values.size() - 1)];
}

namespace {

void put_double(std::ostream& out, double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.write(buf, p - buf);
}

void put_fraction(std::ostream& out, uint64_t num, uint64_t den) {
  char buf[32];
  double f = den == 0 ? 0.0 : static_cast<double>(num) / den;
  int len = snprintf(buf, sizeof buf, "%.6f", f);
  out.write(buf, len);
}

void put_latency(std::ostream& out, double us) {
  char buf[32];
  int len = snprintf(buf, sizeof buf, "%.3f", us);
  out.write(buf, len);
}

}  // namespace

void write_eval_csv(const EvalReport& r, std::ostream& out) {
  out << "alpha,beta,tie_mode,seed,rounds,node_sample,pairs_per_round,pairs,"
         "disconnected,intersecting,along_sp,exact,within_bound,fallback,"
         "fraction_intersecting,fraction_along_sp,fraction_exact,"
         "fraction_within_bound,fallback_rate,"
         "engine_p50_us,engine_p95_us,engine_p99_us,"
         "baseline_p50_us,baseline_p95_us,baseline_p99_us\n";
  for (const EvalRow& row : r.rows) {
    put_double(out, row.alpha);
    out << ',' << row.beta << ','
        << (r.params.tie_mode == TieMode::consistent ? "consistent"
                                                     : "arbitrary")
        << ',' << r.params.seed << ',' << r.params.rounds << ','
        << r.params.node_sample << ',' << r.params.pairs_per_round << ','
        << row.pairs << ',' << row.disconnected << ',' << row.intersecting
        << ',' << row.along_sp << ',' << row.exact << ',' << row.within_bound
        << ',' << row.fallback << ',';
    put_fraction(out, row.intersecting, row.pairs);
    out << ',';
    put_fraction(out, row.along_sp, row.pairs);
    out << ',';
    put_fraction(out, row.exact, row.pairs);
    out << ',';
    put_fraction(out, row.within_bound, row.pairs);
    out << ',';
    put_fraction(out, row.fallback, row.pairs);
    out << ',';
    put_latency(out, row.engine_p50_us);
    out << ',';
    put_latency(out, row.engine_p95_us);
    out << ',';
    put_latency(out, row.engine_p99_us);
    out << ',';
    put_latency(out, row.baseline_p50_us);
    out << ',';
    put_latency(out, row.baseline_p95_us);
    out << ',';
    put_latency(out, row.baseline_p99_us);
    out << '\n';
  }
}

}  // namespace pspt::eval
