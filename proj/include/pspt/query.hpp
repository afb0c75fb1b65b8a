#pragma once

#include <optional>
#include <vector>

#include "pspt/graph.hpp"
#include "pspt/index.hpp"

namespace pspt {

struct Path {
  std::vector<OrigId> nodes;  // s..t
  double length = 0.0;        // sum of traversed edge weights
};

enum class Resolution {
  trivial,       // s == t, or resolved by degree-1 redirection alone
  intersection,  // meeting node found in both blocks
  fallback,      // blocks disjoint, answered by bidirectional search
  unreachable,
};

const char* resolution_name(Resolution r);

struct QueryOutcome {
  std::optional<double> distance;      // nullopt iff unreachable
  std::optional<Path> path;            // present when requested and reachable
  Resolution resolution = Resolution::unreachable;
  std::optional<OrigId> meeting_node;  // present iff resolution==intersection
};

// Point-to-point query over the index: degree-1 endpoints are redirected to
// their anchors, the two blocks are merged for the best meeting node, and
// disjoint blocks fall back to an exact bidirectional search on the original
// graph. Throws Errc::unknown_id for ids absent from the graph.
QueryOutcome query(const Index& idx, const Graph& g, OrigId s, OrigId t,
                   bool want_path);

// Multiple node-disjoint short paths: intersection candidates in ascending
// (distance, id) order, each unvisited meeting node contributing one simple
// path whose nodes are then marked visited. Lengths are non-decreasing and
// the first path equals the single-query path.
std::vector<Path> query_multi(const Index& idx, const Graph& g, OrigId s,
                              OrigId t,
                              std::optional<uint64_t> max_paths = {});

// Members from the root to w obtained by walking first-hop links back from
// w's entry. Throws Errc::contract_violation when w is not a member.
std::vector<NodeId> reconstruct_subpath(const BlockView& block, NodeId w);
std::vector<NodeId> reconstruct_subpath(const Pspt& pspt, NodeId w);

}  // namespace pspt
