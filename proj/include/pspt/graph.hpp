#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace pspt {

using NodeId = uint32_t;  // dense id, 0..n-1
using OrigId = uint64_t;  // external id, arbitrary non-negative integer

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr double kInfDist = std::numeric_limits<double>::infinity();

struct Edge {
  OrigId u = 0;
  OrigId v = 0;
  double w = 1.0;
};
using EdgeList = std::vector<Edge>;

// Undirected weighted graph in CSR form. Immutable after construction;
// dense ids preserve the order of the original ids, so comparing dense ids
// is the same as comparing original ids.
struct Graph {
  std::vector<uint64_t> offsets;  // node_count()+1
  std::vector<NodeId> nbr;        // sorted ascending within each node
  std::vector<double> wgt;
  std::vector<OrigId> id_map;  // dense -> original, strictly ascending

  uint64_t self_loops_dropped = 0;
  uint64_t duplicates_collapsed = 0;

  uint32_t node_count() const { return static_cast<uint32_t>(id_map.size()); }
  uint64_t edge_count() const { return nbr.size() / 2; }

  uint32_t degree(NodeId u) const {
    return static_cast<uint32_t>(offsets[u + 1] - offsets[u]);
  }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {nbr.data() + offsets[u], nbr.data() + offsets[u + 1]};
  }
  std::span<const double> weights(NodeId u) const {
    return {wgt.data() + offsets[u], wgt.data() + offsets[u + 1]};
  }
  OrigId original_id(NodeId u) const { return id_map[u]; }
  std::optional<NodeId> dense_id(OrigId o) const;
  // Weight of edge (u,v), or nullopt when not adjacent.
  std::optional<double> edge_weight(NodeId u, NodeId v) const;
};

// Normalizes an edge soup into a Graph: symmetric adjacency, self-loops
// dropped (counted), duplicate undirected edges collapsed to the minimum
// weight, dense ids assigned in increasing original-id order. extra_nodes
// lets callers introduce isolated nodes, which plain edge lists cannot carry.
Graph make_graph(std::span<const Edge> edges,
                 std::span<const OrigId> extra_nodes = {});

// Parses "u v" / "u v w" lines; '#' starts a comment line; missing weight
// defaults to 1. Throws Errc::parse_error / Errc::invalid_weight with the
// offending line number.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

void write_edge_list(const Graph& g, std::ostream& out);

enum class NodeClass : uint8_t {
  survivor = 0,    // degree >= 2
  redirected = 1,  // degree == 1, routed through its only neighbor
  isolated = 2,    // degree == 0
};

// Single-pass degree-1 pruning of the original graph. Survivorship depends
// only on degrees in the input graph; nodes that drop to degree <= 1 inside
// the pruned graph are kept.
struct PrunedView {
  std::vector<NodeClass> tag;
  std::vector<NodeId> anchor;         // valid iff tag == redirected
  std::vector<double> anchor_weight;  // valid iff tag == redirected
  uint64_t survivor_count = 0;

  bool survives(NodeId u) const { return tag[u] == NodeClass::survivor; }
};

PrunedView prune_degree_one(const Graph& g);

}  // namespace pspt
