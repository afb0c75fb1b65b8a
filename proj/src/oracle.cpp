#include "pspt/oracle.hpp"

#include <algorithm>
#include <queue>

#include "pspt/error.hpp"

namespace pspt {
namespace {

struct Item {
  double d;
  NodeId node;
  bool operator>(const Item& o) const {
    if (d != o.d) return d > o.d;
    return node > o.node;
  }
};

using MinHeap = std::priority_queue<Item, std::vector<Item>, std::greater<>>;

}  // namespace

DistanceMap dijkstra(const Graph& g, NodeId source,
                     const PrunedView* restrict_to) {
  const uint32_t n = g.node_count();
  DistanceMap dm;
  dm.source = source;
  dm.dist.assign(n, kInfDist);
  dm.parent.assign(n, kNoNode);

  MinHeap heap;
  dm.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dm.dist[u]) continue;
    auto ns = g.neighbors(u);
    auto ws = g.weights(u);
    for (size_t k = 0; k < ns.size(); ++k) {
      NodeId v = ns[k];
      if (restrict_to && !restrict_to->survives(v)) continue;
      double nd = d + ws[k];
      if (nd < dm.dist[v]) {
        dm.dist[v] = nd;
        dm.parent[v] = u;
        heap.push({nd, v});
      }
    }
  }
  return dm;
}

BidirResult bidirectional_search(const Graph& g, NodeId s, NodeId t) {
  if (s == t) return {0.0, {s}};
  const uint32_t n = g.node_count();

  std::vector<double> dist[2] = {std::vector<double>(n, kInfDist),
                                 std::vector<double>(n, kInfDist)};
  std::vector<NodeId> parent[2] = {std::vector<NodeId>(n, kNoNode),
                                   std::vector<NodeId>(n, kNoNode)};
  MinHeap heap[2];
  dist[0][s] = 0.0;
  dist[1][t] = 0.0;
  heap[0].push({0.0, s});
  heap[1].push({0.0, t});

  double best = kInfDist;
  NodeId meet = kNoNode;

  while (!heap[0].empty() && !heap[1].empty()) {
    if (heap[0].top().d + heap[1].top().d >= best) break;
    int side = heap[0].top().d <= heap[1].top().d ? 0 : 1;
    auto [d, u] = heap[side].top();
    heap[side].pop();
    if (d != dist[side][u]) continue;
    auto ns = g.neighbors(u);
    auto ws = g.weights(u);
    for (size_t k = 0; k < ns.size(); ++k) {
      NodeId v = ns[k];
      double nd = d + ws[k];
      if (nd < dist[side][v]) {
        dist[side][v] = nd;
        parent[side][v] = u;
        heap[side].push({nd, v});
      }
      double other = dist[side ^ 1][v];
      if (other != kInfDist) {
        double through = nd + other;
        if (through < best || (through == best && v < meet)) {
          best = through;
          meet = v;
        }
      }
    }
  }
  if (meet == kNoNode) return {std::nullopt, {}};

  std::vector<NodeId> path;
  for (NodeId x = meet; x != kNoNode; x = parent[0][x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  for (NodeId x = parent[1][meet]; x != kNoNode; x = parent[1][x])
    path.push_back(x);
  return {best, std::move(path)};
}

std::vector<NodeId> AllPairs::shortest_path_nodes(NodeId s, NodeId t) const {
  std::vector<NodeId> out;
  if (!reachable(s, t)) return out;
  for (NodeId x = 0; x < n_; ++x)
    if (on_shortest_path(s, x, t)) out.push_back(x);
  return out;
}

AllPairs all_pairs_paths(const Graph& g, uint32_t max_n) {
  if (g.node_count() > max_n)
    raise(Errc::size_guard, "all_pairs_paths: graph exceeds max_n = " +
                                std::to_string(max_n));
  AllPairs ap(g.node_count());
  for (NodeId s = 0; s < g.node_count(); ++s) {
    DistanceMap dm = dijkstra(g, s);
    for (NodeId v = 0; v < g.node_count(); ++v) ap.at(s, v) = dm.dist[v];
  }
  return ap;
}

}  // namespace pspt
