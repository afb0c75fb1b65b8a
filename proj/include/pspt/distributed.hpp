#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pspt/graph.hpp"
#include "pspt/index.hpp"

// Deterministic in-process simulation of the three-step batch query scheme:
// map (emit one record per block entry of each queried node), shuffle by
// meeting-node key, reduce (pair values per key, then take the per-pair
// minimum). Machines are logical partitions; records are canonically sorted
// between steps so the output never depends on the machine count.

namespace pspt {

struct ClusterPlan {
  uint32_t machines = 1;
  uint64_t seed = 0;

  uint32_t machine_of_key(uint64_t key) const;
};

enum class PairStatus : uint8_t {
  ok = 0,
  no_intersection = 1,  // no common block member; caller may fall back
  rejected = 2,         // endpoint pruned, isolated, or equal to its peer
  unknown_id = 3,
};

const char* pair_status_name(PairStatus s);

struct PairResult {
  OrigId u = 0, v = 0;  // normalized u < v
  PairStatus status = PairStatus::unknown_id;
  std::optional<double> distance;
  std::optional<OrigId> meeting;
  std::optional<std::vector<OrigId>> path;
};

struct MachineStats {
  uint64_t owned_queried_nodes = 0;
  uint64_t step1_entries = 0;       // block entries held for queried nodes
  uint64_t shuffle_in_records = 0;  // records routed to this machine
  uint64_t index_entries = 0;       // full shard size, informational
};

struct BatchRun {
  uint32_t machines = 1;
  double alpha = 0.0;
  uint64_t node_count = 0;
  bool want_paths = false;
  std::vector<PairResult> results;  // ascending (u, v)
  std::vector<MachineStats> per_machine;
  uint64_t shuffle_records = 0;
  uint64_t shuffle_bytes = 0;
  uint64_t step2_pairs_emitted = 0;
  uint64_t max_key_fan_in = 0;
};

struct BatchOptions {
  bool want_paths = false;
  uint64_t fan_in_cap = 10000;  // per-key value cap, overflow is an error
};

// Q as explicit pairs; duplicates collapse, (u,v) == (v,u).
BatchRun batch_query_pairs(const Index& idx, const Graph& g,
                           std::span<const std::pair<OrigId, OrigId>> pairs,
                           const ClusterPlan& plan,
                           const BatchOptions& opts = {});

// Q as a node set: all unordered pairs over it.
BatchRun batch_query_nodes(const Index& idx, const Graph& g,
                           std::span<const OrigId> nodes,
                           const ClusterPlan& plan,
                           const BatchOptions& opts = {});

struct Accounting {
  uint32_t machines = 1;
  uint64_t max_step1_entries = 0;
  uint64_t storage_bound = 0;  // ceil(alpha * n * sqrt(n) / machines)
  bool storage_within_bound = false;
  uint64_t shuffle_records = 0;
  uint64_t shuffle_bytes = 0;
  uint64_t max_key_fan_in = 0;
  uint64_t step2_pairs_emitted = 0;
};

Accounting account(const BatchRun& run);

// "u,v,distance,meeting_node,status[,path]" with a header row.
void write_results_csv(const BatchRun& run, std::ostream& out);
void write_accounting_csv(const BatchRun& run, std::ostream& out);

}  // namespace pspt
