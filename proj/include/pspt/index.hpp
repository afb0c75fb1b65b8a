#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pspt/graph.hpp"

namespace pspt {

// first_hop value of a block's root entry.
inline constexpr uint32_t kNoHop = 0xffffffffu;
inline constexpr uint32_t kNoBlock = 0xffffffffu;

struct PsptEntry {
  NodeId member = 0;        // dense id of w
  double distance = 0.0;    // d(root, w) inside the pruned graph
  uint32_t first_hop = 0;   // block-local index of the next node from w
                            // toward the root; kNoHop for the root entry
};

// One node's partial shortest path tree, entries sorted ascending by member.
struct Pspt {
  NodeId root = 0;
  std::vector<PsptEntry> entries;
};

// Zero-copy view of one block inside an Index.
struct BlockView {
  std::span<const NodeId> members;
  std::span<const double> dist;
  std::span<const uint32_t> hops;
  size_t size() const { return members.size(); }
};

struct Index {
  double alpha = 4.0;
  uint64_t beta = 0;  // ceil(alpha * sqrt(n)) over the original node count
  std::vector<OrigId> id_map;
  PrunedView pruned;

  // Blocks laid out as one flat sorted-array arena, one slice per survivor.
  std::vector<NodeId> roots;            // ascending
  std::vector<uint64_t> block_offsets;  // roots.size()+1
  std::vector<NodeId> members;
  std::vector<double> dist;
  std::vector<uint32_t> hops;
  std::vector<uint32_t> block_idx;  // per node, kNoBlock for non-survivors

  uint32_t node_count() const { return static_cast<uint32_t>(id_map.size()); }
  uint64_t entry_count() const { return members.size(); }
  bool has_block(NodeId u) const { return block_idx[u] != kNoBlock; }
  BlockView block_at(size_t b) const {
    uint64_t lo = block_offsets[b], hi = block_offsets[b + 1];
    return {{members.data() + lo, members.data() + hi},
            {dist.data() + lo, dist.data() + hi},
            {hops.data() + lo, hops.data() + hi}};
  }
  BlockView block(NodeId u) const { return block_at(block_idx[u]); }
  std::optional<NodeId> dense_id(OrigId o) const;
};

// beta = ceil(alpha * sqrt(n)), clamped to >= 1.
uint64_t beta_for(double alpha, uint64_t node_count);

// Truncated Dijkstra from `root` restricted to survivors, frontier ordered by
// (tentative distance, tie key) where the tie key defaults to the node id;
// stops after min(beta, reachable) settlements. tie_perm, when given, remaps
// the tie key (used by the arbitrary-tie-breaking experiments).
Pspt build_pspt(const Graph& g, const PrunedView& pruned, NodeId root,
                uint64_t beta, const std::vector<uint32_t>* tie_perm = nullptr);

struct BuildOptions {
  int threads = 0;  // <= 0: hardware concurrency
  const std::vector<uint32_t>* tie_perm = nullptr;
};

Index build_index(const Graph& g, double alpha, const BuildOptions& opts = {});

struct Candidate {
  NodeId member = 0;
  double dist_a = 0.0;
  double dist_b = 0.0;
};

// All common members with both distances, ascending by member id; a single
// linear merge pass over the two sorted blocks.
std::vector<Candidate> intersect(const BlockView& a, const BlockView& b);
std::vector<Candidate> intersect(const Pspt& a, const Pspt& b);

// Binary index format, little-endian, CRC-32 footer. Ids in the body are
// dense indices into the stored id map.
void serialize(const Index& idx, std::ostream& out);
Index deserialize(std::istream& in);
void save_index_file(const Index& idx, const std::string& path);
Index load_index_file(const std::string& path);

// Exact byte size serialize() will produce (format arithmetic).
uint64_t serialized_size(const Index& idx);

bool structurally_equal(const Index& a, const Index& b);

}  // namespace pspt
