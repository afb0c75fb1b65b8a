#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

#include "pspt/gen.hpp"
#include "pspt/graph.hpp"
#include "pspt/index.hpp"
#include "pspt/oracle.hpp"
#include "pspt/query.hpp"

namespace testutil {

using namespace pspt;

// 16-node network where degree-1 pruning removes exactly
// {3,7,8,11,12,13,14,16} and, inside the pruned graph, node 1's unit-weight
// neighbors are exactly {2,4,5,6,9}.
inline Graph demo16_graph() {
  EdgeList e = {
      {1, 2, 1},  {1, 4, 1},   {1, 5, 1},   {1, 6, 1},
      {1, 9, 1},  {2, 3, 1},   {4, 5, 1},   {6, 7, 1},
      {6, 8, 1},  {9, 10, 1},  {10, 11, 1}, {10, 12, 1},
      {10, 13, 1}, {10, 14, 1}, {10, 15, 1}, {15, 16, 1},
  };
  return make_graph(e);
}

// Two length-2 / length-3 routes between a and c: a-b-c and a-d-e-c.
inline Graph two_route_graph() {
  EdgeList e = {{0, 1, 1}, {1, 2, 1}, {0, 3, 1}, {3, 4, 1}, {4, 2, 1}};
  return make_graph(e);
}

// Unit-weight graph whose blocks (beta = 4) share only an off-path node:
// path s-a-b-t of length 3, detour s-x1-x-x2-t of length 4, with the tie
// breaks arranged so x displaces b from s's block and a from t's block.
// query(s,t) = 4 = oracle + 1.
struct TieDetourGraph {
  Graph g;
  OrigId s = 4, t = 5;
  double oracle = 3, returned = 4;
  double alpha = 1.4;  // beta = ceil(1.4 * sqrt(7)) = 4
};
inline TieDetourGraph tie_detour_graph() {
  TieDetourGraph r;
  EdgeList e = {{4, 6, 1}, {6, 7, 1}, {7, 5, 1},   // s-a-b-t
                {4, 1, 1}, {1, 0, 1},              // s-x1-x
                {0, 2, 1}, {2, 5, 1}};             // x-x2-t
  r.g = make_graph(e);
  return r;
}

// Weighted graph whose blocks (beta = 7) share only the off-path node x:
// s-u-t of length 10, s-x-t of length 10.2, with crowding pairs keeping u
// out of t's block and t out of s's block. query(s,t) = 10.2.
struct WeightedDetourGraph {
  Graph g;
  OrigId s = 0, t = 1;
  // Written as the sums the engine itself forms, so the equality checks do
  // not depend on decimal literals rounding the same way.
  double oracle = 4.9 + 5.1, returned = 5.2 + 5.0;
  double alpha = 1.9;  // beta = ceil(1.9 * sqrt(13)) = 7
};
inline WeightedDetourGraph weighted_detour_graph() {
  WeightedDetourGraph r;
  EdgeList e = {
      {0, 2, 4.9},  {2, 1, 5.1},             // s-u-t
      {0, 3, 5.2},  {3, 1, 5.0},             // s-x-t
      {0, 4, 4.95}, {4, 5, 0.1}, {5, 0, 4.95},   // crowd near s
      {0, 6, 6.0},  {6, 7, 0.1}, {7, 0, 6.0},    // far crowd near s
      {1, 8, 5.05}, {8, 9, 0.1}, {9, 1, 5.05},   // crowd near t
      {1, 10, 5.06}, {10, 11, 0.1}, {11, 1, 5.06},
      {1, 12, 5.09}, {12, 8, 0.2},            // odd crowd node near t
  };
  r.g = make_graph(e);
  return r;
}

inline Graph load_text(const std::string& text) {
  std::istringstream ss(text);
  return load_edge_list(ss);
}

// Brute-force single-source oracle (the oracle's oracle).
inline std::vector<double> bellman_ford(const Graph& g, NodeId src) {
  std::vector<double> d(g.node_count(), kInfDist);
  d[src] = 0.0;
  for (uint32_t it = 0; it + 1 < std::max<uint32_t>(g.node_count(), 1); ++it) {
    bool changed = false;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (d[u] == kInfDist) continue;
      auto ns = g.neighbors(u);
      auto ws = g.weights(u);
      for (size_t k = 0; k < ns.size(); ++k)
        if (d[u] + ws[k] < d[ns[k]]) {
          d[ns[k]] = d[u] + ws[k];
          changed = true;
        }
    }
    if (!changed) break;
  }
  return d;
}

// A path is a genuine walk with matching recomputed length.
inline bool valid_path(const Graph& g, const Path& p, OrigId s, OrigId t) {
  if (p.nodes.empty() || p.nodes.front() != s || p.nodes.back() != t)
    return false;
  double len = 0.0;
  for (size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    auto u = g.dense_id(p.nodes[i]);
    auto v = g.dense_id(p.nodes[i + 1]);
    if (!u || !v) return false;
    auto w = g.edge_weight(*u, *v);
    if (!w) return false;
    len += *w;
  }
  return len == p.length;
}

inline bool simple_path(const Path& p) {
  auto nodes = p.nodes;
  std::sort(nodes.begin(), nodes.end());
  return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

// Mixed random test graph: even seeds unit weights, odd seeds integer
// weights in [1, 9].
inline Graph random_graph(uint64_t seed, uint64_t n, double avg_deg = 4.0) {
  gen::WeightRange w;
  if (seed % 2 == 1) w = {1, 9};
  double p = std::min(1.0, avg_deg / static_cast<double>(n - 1));
  return gen::to_graph(gen::erdos_renyi(n, p, seed, w), n);
}

inline std::vector<NodeId> block_members(const Index& idx, NodeId root) {
  BlockView b = idx.block(root);
  return {b.members.begin(), b.members.end()};
}

}  // namespace testutil
