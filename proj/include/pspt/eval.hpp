#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pspt/graph.hpp"
#include "pspt/index.hpp"
#include "pspt/query.hpp"

// Experiment harness: samples node pairs, classifies each against the exact
// oracle (no intersection / intersects off the shortest path / intersects
// along it), verifies the additive error bound, and reports per-alpha rows
// with engine/baseline latency percentiles.

namespace pspt::eval {

enum class TieMode { consistent, arbitrary };

struct EvalParams {
  std::vector<double> alphas{4.0};
  uint32_t node_sample = 200;     // nodes drawn per round
  uint32_t pairs_per_round = 2000;
  uint32_t rounds = 5;
  uint64_t seed = 1;
  TieMode tie_mode = TieMode::consistent;
  int threads = 0;
  bool measure_latency = true;  // off: latency columns are zero and the CSV
                                // is byte-reproducible
};

struct EvalRow {
  double alpha = 0.0;
  uint64_t beta = 0;
  uint64_t pairs = 0;
  uint64_t disconnected = 0;
  uint64_t intersecting = 0;   // resolved via block intersection
  uint64_t along_sp = 0;       // some common member realizes the oracle sum
  uint64_t exact = 0;          // intersection answer equals the oracle
  uint64_t within_bound = 0;   // intersection answer <= oracle + W_max
  uint64_t fallback = 0;
  double engine_p50_us = 0, engine_p95_us = 0, engine_p99_us = 0;
  double baseline_p50_us = 0, baseline_p95_us = 0, baseline_p99_us = 0;
};

struct EvalReport {
  EvalParams params;
  uint64_t node_count = 0;
  std::vector<EvalRow> rows;
};

// Ordered (s,t) samples, s != t, drawn from per-round node samples over the
// whole id space (pruned nodes included). Pure function of its arguments.
std::vector<std::pair<OrigId, OrigId>> sample_eval_pairs(
    const Graph& g, uint32_t node_sample, uint32_t pairs_per_round,
    uint32_t rounds, uint64_t seed);

// Seeded permutation of the dense id space, the tie key for the
// arbitrary-tie-breaking runs.
std::vector<uint32_t> arbitrary_tie_perm(uint32_t n, uint64_t seed);

// Max edge weight incident on any member of a source block, the additive
// error term of the intersection bound; memoized per block.
class WmaxCache {
 public:
  WmaxCache(const Index& idx, const Graph& g);
  double for_core(NodeId core);

 private:
  const Index& idx_;
  const Graph& g_;
  std::vector<double> cache_;
};

struct PairClass {
  Resolution resolution = Resolution::unreachable;
  std::optional<double> engine_distance;
  bool disconnected = false;
  bool intersecting = false;
  bool along_sp = false;
  bool exact = false;
  bool within_bound = false;
};

PairClass classify_pair(const Index& idx, const Graph& g, OrigId s, OrigId t,
                        std::optional<double> oracle_distance,
                        WmaxCache& wmax);

EvalReport run_eval(const Graph& g, const EvalParams& params);

void write_eval_csv(const EvalReport& report, std::ostream& out);

// Nearest-rank percentile; q in (0, 100].
double percentile(std::vector<double> values, double q);

}  // namespace pspt::eval
