#pragma once

#include <optional>
#include <vector>

#include "pspt/graph.hpp"

// Ground-truth shortest-path algorithms: the query-time fallback and the
// independent oracle every other module is checked against. Everything here
// works on dense ids.

namespace pspt {

struct DistanceMap {
  NodeId source = 0;
  std::vector<double> dist;    // kInfDist when unreachable
  std::vector<NodeId> parent;  // kNoNode for the source / unreachable
  bool reachable(NodeId u) const { return dist[u] != kInfDist; }
};

// Exact single-source distances, frontier ordered by (distance, id). When
// `restrict_to` is given the search stays inside the survivor subgraph.
DistanceMap dijkstra(const Graph& g, NodeId source,
                     const PrunedView* restrict_to = nullptr);

struct BidirResult {
  std::optional<double> distance;  // nullopt: unreachable
  std::vector<NodeId> path;        // s..t when reachable
};

// Exact point-to-point search from both ends; stops once the two frontier
// minima together cannot beat the best meeting candidate.
BidirResult bidirectional_search(const Graph& g, NodeId s, NodeId t);

class AllPairs {
 public:
  AllPairs(uint32_t n) : n_(n), d_(static_cast<size_t>(n) * n, kInfDist) {}
  double at(NodeId u, NodeId v) const { return d_[size_t(u) * n_ + v]; }
  double& at(NodeId u, NodeId v) { return d_[size_t(u) * n_ + v]; }
  bool reachable(NodeId u, NodeId v) const { return at(u, v) != kInfDist; }
  // x lies on at least one shortest s-t path.
  bool on_shortest_path(NodeId s, NodeId x, NodeId t) const {
    return reachable(s, t) && at(s, x) + at(x, t) == at(s, t);
  }
  std::vector<NodeId> shortest_path_nodes(NodeId s, NodeId t) const;
  uint32_t n() const { return n_; }

 private:
  uint32_t n_;
  std::vector<double> d_;
};

// Exact all-pairs table via repeated Dijkstra; refuses graphs above max_n.
AllPairs all_pairs_paths(const Graph& g, uint32_t max_n = 500);

}  // namespace pspt
