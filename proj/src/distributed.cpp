#include "pspt/distributed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "pspt/detail/rng.hpp"
#include "pspt/error.hpp"
#include "pspt/query.hpp"

namespace pspt {

uint32_t ClusterPlan::machine_of_key(uint64_t key) const {
  uint64_t h = detail::splitmix64(key ^ detail::splitmix64(seed));
  return static_cast<uint32_t>(h % machines);
}

const char* pair_status_name(PairStatus s) {
  switch (s) {
    case PairStatus::ok: return "ok";
    case PairStatus::no_intersection: return "no_intersection";
    case PairStatus::rejected: return "rejected";
    case PairStatus::unknown_id: return "unknown_id";
  }
  return "?";
}

namespace {

struct DensePair {
  NodeId u, v;  // u < v
  bool operator<(const DensePair& o) const {
    return u != o.u ? u < o.u : v < o.v;
  }
  bool operator==(const DensePair& o) const { return u == o.u && v == o.v; }
};

struct EmitRecord {
  NodeId key;   // block member w
  NodeId src;   // queried node u
  double dist;  // d(src, key)
};

struct PairRecord {
  double dist;
  NodeId meeting;
};

// q_nodes: the nodes Step 1 iterates (in node-set mode all surviving set
// members emit, even when there is nothing to pair them with).
BatchRun run_batch(const Index& idx, const Graph& g,
                   std::vector<DensePair> requested,
                   std::vector<PairResult> rejected,
                   std::vector<NodeId> q_nodes, const ClusterPlan& plan,
                   const BatchOptions& opts) {
  if (g.node_count() != idx.node_count() || g.id_map != idx.id_map)
    raise(Errc::contract_violation, "index was not built from this graph");
  if (plan.machines == 0)
    raise(Errc::invalid_argument, "machine count must be >= 1");

  const uint32_t p = plan.machines;
  BatchRun run;
  run.machines = p;
  run.alpha = idx.alpha;
  run.node_count = idx.node_count();
  run.want_paths = opts.want_paths;
  run.per_machine.resize(p);

  std::sort(requested.begin(), requested.end());
  requested.erase(std::unique(requested.begin(), requested.end()),
                  requested.end());
  std::sort(rejected.begin(), rejected.end(),
            [](const PairResult& x, const PairResult& y) {
              return x.u != y.u ? x.u < y.u : x.v < y.v;
            });
  rejected.erase(std::unique(rejected.begin(), rejected.end(),
                             [](const PairResult& x, const PairResult& y) {
                               return x.u == y.u && x.v == y.v;
                             }),
                 rejected.end());
  std::sort(q_nodes.begin(), q_nodes.end());
  q_nodes.erase(std::unique(q_nodes.begin(), q_nodes.end()), q_nodes.end());

  // Full-shard sizes (what each machine would hold at rest).
  for (size_t b = 0; b < idx.roots.size(); ++b) {
    uint32_t m = plan.machine_of_key(idx.roots[b]);
    run.per_machine[m].index_entries +=
        idx.block_offsets[b + 1] - idx.block_offsets[b];
  }

  // Step 1: each machine emits one record per block entry of its owned
  // queried nodes.
  std::vector<EmitRecord> records;
  for (uint32_t m = 0; m < p; ++m) {
    MachineStats& ms = run.per_machine[m];
    for (NodeId u : q_nodes) {
      if (plan.machine_of_key(u) != m) continue;
      ++ms.owned_queried_nodes;
      BlockView blk = idx.block(u);
      ms.step1_entries += blk.size();
      for (size_t i = 0; i < blk.size(); ++i) {
        records.push_back({blk.members[i], u, blk.dist[i]});
        uint64_t bytes = 24;  // key + source + distance
        if (opts.want_paths) {
          uint64_t hops_len = 1;
          for (uint32_t x = static_cast<uint32_t>(i); blk.hops[x] != kNoHop;
               x = blk.hops[x])
            ++hops_len;
          bytes += 8 * hops_len;
        }
        run.shuffle_bytes += bytes;
      }
    }
  }
  run.shuffle_records = records.size();

  // Shuffle: route by key; canonical (key, src) order makes the reduce
  // stages independent of arrival order.
  for (const EmitRecord& r : records)
    ++run.per_machine[plan.machine_of_key(r.key)].shuffle_in_records;
  std::sort(records.begin(), records.end(),
            [](const EmitRecord& x, const EmitRecord& y) {
              return x.key != y.key ? x.key < y.key : x.src < y.src;
            });

  // Step 2: per key, pair up the received values, keeping only requested
  // pairs. Step 3: per pair, the minimum candidate wins, ties to the
  // smaller meeting id.
  std::vector<PairRecord> winner(requested.size());
  std::vector<uint8_t> has_winner(requested.size(), 0);
  auto find_pair = [&](NodeId a, NodeId b) -> size_t {
    DensePair key{a, b};
    auto it = std::lower_bound(requested.begin(), requested.end(), key);
    if (it == requested.end() || !(*it == key)) return requested.size();
    return static_cast<size_t>(it - requested.begin());
  };

  size_t lo = 0;
  while (lo < records.size()) {
    size_t hi = lo;
    while (hi < records.size() && records[hi].key == records[lo].key) ++hi;
    uint64_t fan_in = hi - lo;
    run.max_key_fan_in = std::max(run.max_key_fan_in, fan_in);
    if (fan_in > opts.fan_in_cap)
      raise(Errc::fan_in_overflow,
            "key fan-in " + std::to_string(fan_in) + " exceeds cap " +
                std::to_string(opts.fan_in_cap));
    for (size_t i = lo; i < hi; ++i) {
      for (size_t j = i + 1; j < hi; ++j) {
        size_t slot = find_pair(records[i].src, records[j].src);
        if (slot == requested.size()) continue;
        ++run.step2_pairs_emitted;
        PairRecord c{records[i].dist + records[j].dist, records[i].key};
        if (!has_winner[slot] || c.dist < winner[slot].dist ||
            (c.dist == winner[slot].dist && c.meeting < winner[slot].meeting)) {
          winner[slot] = c;
          has_winner[slot] = 1;
        }
      }
    }
    lo = hi;
  }

  run.results.reserve(requested.size() + rejected.size());
  for (size_t i = 0; i < requested.size(); ++i) {
    PairResult pr;
    pr.u = idx.id_map[requested[i].u];
    pr.v = idx.id_map[requested[i].v];
    if (!has_winner[i]) {
      pr.status = PairStatus::no_intersection;
    } else {
      pr.status = PairStatus::ok;
      pr.distance = winner[i].dist;
      pr.meeting = idx.id_map[winner[i].meeting];
      if (opts.want_paths) {
        BlockView ba = idx.block(requested[i].u);
        BlockView bb = idx.block(requested[i].v);
        auto left = reconstruct_subpath(ba, winner[i].meeting);   // u..w
        auto right = reconstruct_subpath(bb, winner[i].meeting);  // v..w
        std::vector<OrigId> path;
        path.reserve(left.size() + right.size() - 1);
        for (NodeId x : left) path.push_back(idx.id_map[x]);
        for (auto it = right.rbegin() + 1; it != right.rend(); ++it)
          path.push_back(idx.id_map[*it]);
        pr.path = std::move(path);
      }
    }
    run.results.push_back(std::move(pr));
  }
  run.results.insert(run.results.end(), rejected.begin(), rejected.end());
  std::sort(run.results.begin(), run.results.end(),
            [](const PairResult& x, const PairResult& y) {
              return x.u != y.u ? x.u < y.u : x.v < y.v;
            });
  return run;
}

}  // namespace

BatchRun batch_query_pairs(const Index& idx, const Graph& g,
                           std::span<const std::pair<OrigId, OrigId>> pairs,
                           const ClusterPlan& plan, const BatchOptions& opts) {
  if (pairs.empty()) raise(Errc::empty_batch, "batch query set is empty");
  std::vector<DensePair> requested;
  std::vector<PairResult> rejected;
  for (auto [a, b] : pairs) {
    OrigId lo = std::min(a, b), hi = std::max(a, b);
    auto du = idx.dense_id(lo), dv = idx.dense_id(hi);
    if (!du || !dv) {
      rejected.push_back({lo, hi, PairStatus::unknown_id, {}, {}, {}});
      continue;
    }
    if (*du == *dv || !idx.pruned.survives(*du) || !idx.pruned.survives(*dv)) {
      rejected.push_back({lo, hi, PairStatus::rejected, {}, {}, {}});
      continue;
    }
    requested.push_back({*du, *dv});
  }
  std::vector<NodeId> q_nodes;
  q_nodes.reserve(requested.size() * 2);
  for (const DensePair& pr : requested) {
    q_nodes.push_back(pr.u);
    q_nodes.push_back(pr.v);
  }
  return run_batch(idx, g, std::move(requested), std::move(rejected),
                   std::move(q_nodes), plan, opts);
}

BatchRun batch_query_nodes(const Index& idx, const Graph& g,
                           std::span<const OrigId> nodes,
                           const ClusterPlan& plan, const BatchOptions& opts) {
  if (nodes.empty()) raise(Errc::empty_batch, "batch query set is empty");
  std::vector<NodeId> q_nodes;
  std::vector<OrigId> alive;
  std::vector<PairResult> rejected_nodes;  // paired up below
  std::vector<OrigId> uniq(nodes.begin(), nodes.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  std::vector<std::pair<OrigId, PairStatus>> bad;
  for (OrigId o : uniq) {
    auto d = idx.dense_id(o);
    if (!d) {
      bad.emplace_back(o, PairStatus::unknown_id);
    } else if (!idx.pruned.survives(*d)) {
      bad.emplace_back(o, PairStatus::rejected);
    } else {
      alive.push_back(o);
      q_nodes.push_back(*d);
    }
  }
  std::vector<DensePair> requested;
  requested.reserve(alive.size() * (alive.size() - 1) / 2);
  for (size_t i = 0; i < alive.size(); ++i)
    for (size_t j = i + 1; j < alive.size(); ++j)
      requested.push_back(
          {*idx.dense_id(alive[i]), *idx.dense_id(alive[j])});
  // Every pair touching a bad node is reported with that node's status.
  for (auto [o, status] : bad)
    for (OrigId other : uniq)
      if (other != o)
        rejected_nodes.push_back({std::min(o, other), std::max(o, other),
                                  status, {}, {}, {}});
  return run_batch(idx, g, std::move(requested), std::move(rejected_nodes),
                   std::move(q_nodes), plan, opts);
}

Accounting account(const BatchRun& run) {
  Accounting a;
  a.machines = run.machines;
  for (const MachineStats& ms : run.per_machine)
    a.max_step1_entries = std::max(a.max_step1_entries, ms.step1_entries);
  double n = static_cast<double>(run.node_count);
  a.storage_bound = static_cast<uint64_t>(
      std::ceil(run.alpha * n * std::sqrt(n) / run.machines));
  a.storage_within_bound = a.max_step1_entries <= a.storage_bound;
  a.shuffle_records = run.shuffle_records;
  a.shuffle_bytes = run.shuffle_bytes;
  a.max_key_fan_in = run.max_key_fan_in;
  a.step2_pairs_emitted = run.step2_pairs_emitted;
  return a;
}

namespace {

void append_double(std::string& s, double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  s.append(buf, p);
}

}  // namespace

void write_results_csv(const BatchRun& run, std::ostream& out) {
  out << (run.want_paths ? "u,v,distance,meeting_node,status,path\n"
                         : "u,v,distance,meeting_node,status\n");
  std::string line;
  for (const PairResult& r : run.results) {
    line.clear();
    line += std::to_string(r.u);
    line += ',';
    line += std::to_string(r.v);
    line += ',';
    if (r.distance) append_double(line, *r.distance);
    line += ',';
    if (r.meeting) line += std::to_string(*r.meeting);
    line += ',';
    line += pair_status_name(r.status);
    if (run.want_paths) {
      line += ',';
      if (r.path) {
        for (size_t i = 0; i < r.path->size(); ++i) {
          if (i) line += ' ';
          line += std::to_string((*r.path)[i]);
        }
      }
    }
    line += '\n';
    out << line;
  }
}

void write_accounting_csv(const BatchRun& run, std::ostream& out) {
  Accounting a = account(run);
  out << "machine,owned_queried_nodes,step1_entries,shuffle_in_records,"
         "index_entries\n";
  for (uint32_t m = 0; m < run.machines; ++m) {
    const MachineStats& ms = run.per_machine[m];
    out << m << ',' << ms.owned_queried_nodes << ',' << ms.step1_entries
        << ',' << ms.shuffle_in_records << ',' << ms.index_entries << '\n';
  }
  out << "summary,machines,max_step1_entries,storage_bound,within_bound,"
         "shuffle_records,shuffle_bytes,max_key_fan_in,step2_pairs\n";
  out << "summary," << a.machines << ',' << a.max_step1_entries << ','
      << a.storage_bound << ',' << (a.storage_within_bound ? 1 : 0) << ','
      << a.shuffle_records << ',' << a.shuffle_bytes << ','
      << a.max_key_fan_in << ',' << a.step2_pairs_emitted << '\n';
}

}  // namespace pspt
