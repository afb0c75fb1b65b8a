#include <doctest.h>

#include "helpers.hpp"
#include "pspt/detail/rng.hpp"
#include "pspt/error.hpp"

using namespace pspt;

TEST_CASE("dijkstra: single node") {
  Graph g = gen::to_graph({}, 1);
  DistanceMap dm = dijkstra(g, 0);
  CHECK(dm.dist[0] == 0.0);
  CHECK(dm.parent[0] == kNoNode);
}

TEST_CASE("dijkstra: unit path") {
  Graph g = testutil::load_text("0 1\n1 2\n");
  DistanceMap dm = dijkstra(g, *g.dense_id(0));
  CHECK(dm.dist[*g.dense_id(0)] == 0.0);
  CHECK(dm.dist[*g.dense_id(1)] == 1.0);
  CHECK(dm.dist[*g.dense_id(2)] == 2.0);
}

TEST_CASE("dijkstra agrees with Bellman-Ford on random graphs") {
  for (uint64_t seed : {1, 2, 3}) {
    Graph g = testutil::random_graph(seed, 100);
    for (NodeId src : {NodeId(0), NodeId(g.node_count() / 2)}) {
      DistanceMap dm = dijkstra(g, src);
      auto bf = testutil::bellman_ford(g, src);
      for (NodeId u = 0; u < g.node_count(); ++u) CHECK(dm.dist[u] == bf[u]);
    }
  }
}

TEST_CASE("dijkstra triangle consistency") {
  Graph g = testutil::random_graph(4, 80);
  DistanceMap dm = dijkstra(g, 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!dm.reachable(u)) continue;
    auto ns = g.neighbors(u);
    auto ws = g.weights(u);
    for (size_t k = 0; k < ns.size(); ++k)
      CHECK(dm.dist[ns[k]] <= dm.dist[u] + ws[k]);
  }
}

TEST_CASE("restricted dijkstra stays inside the survivor subgraph") {
  Graph g = testutil::demo16_graph();
  PrunedView pv = prune_degree_one(g);
  DistanceMap dm = dijkstra(g, *g.dense_id(1), &pv);
  CHECK(!dm.reachable(*g.dense_id(3)));   // pruned
  CHECK(dm.reachable(*g.dense_id(15)));   // survivor, via survivors only
}

TEST_CASE("bidirectional: trivial and disconnected") {
  Graph g = gen::to_graph({{0, 1, 1}, {2, 3, 1}}, 4);
  auto same = bidirectional_search(g, 1, 1);
  REQUIRE(same.distance.has_value());
  CHECK(*same.distance == 0.0);
  CHECK(same.path == std::vector<NodeId>{1});

  auto split = bidirectional_search(g, *g.dense_id(0), *g.dense_id(2));
  CHECK(!split.distance.has_value());
}

TEST_CASE("bidirectional equals dijkstra on 1000 random pairs") {
  Graph g = testutil::random_graph(5, 1000, 4.0);
  detail::SplitMix64 rng(17);
  DistanceMap cached;
  NodeId cached_src = kNoNode;
  for (int i = 0; i < 1000; ++i) {
    NodeId s = static_cast<NodeId>(rng.below(g.node_count()));
    NodeId t = static_cast<NodeId>(rng.below(g.node_count()));
    if (cached_src != s) {
      cached = dijkstra(g, s);
      cached_src = s;
    }
    auto br = bidirectional_search(g, s, t);
    if (cached.reachable(t)) {
      REQUIRE(br.distance.has_value());
      CHECK(*br.distance == cached.dist[t]);
      // The returned path is a genuine walk of that exact length.
      double len = 0.0;
      for (size_t k = 0; k + 1 < br.path.size(); ++k) {
        auto w = g.edge_weight(br.path[k], br.path[k + 1]);
        REQUIRE(w.has_value());
        len += *w;
      }
      CHECK(len == *br.distance);
      CHECK(br.path.front() == s);
      CHECK(br.path.back() == t);
    } else {
      CHECK(!br.distance.has_value());
    }
  }
}

TEST_CASE("all pairs: triangle") {
  Graph g = testutil::load_text("0 1\n1 2\n0 2\n");
  AllPairs ap = all_pairs_paths(g);
  for (NodeId u = 0; u < 3; ++u)
    for (NodeId v = 0; v < 3; ++v)
      CHECK(ap.at(u, v) == (u == v ? 0.0 : 1.0));
}

TEST_CASE("all pairs: demo16 distance 3 to 1 is 2") {
  Graph g = testutil::demo16_graph();
  AllPairs ap = all_pairs_paths(g);
  CHECK(ap.at(*g.dense_id(3), *g.dense_id(1)) == 2.0);
}

TEST_CASE("all pairs matches repeated dijkstra") {
  Graph g = testutil::random_graph(7, 50);
  AllPairs ap = all_pairs_paths(g);
  for (NodeId s = 0; s < g.node_count(); ++s) {
    DistanceMap dm = dijkstra(g, s);
    for (NodeId v = 0; v < g.node_count(); ++v) CHECK(ap.at(s, v) == dm.dist[v]);
  }
}

TEST_CASE("all pairs size guard") {
  Graph g = testutil::random_graph(1, 60);
  try {
    all_pairs_paths(g, 50);
    FAIL("expected size_guard");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::size_guard);
  }
}

TEST_CASE("on-shortest-path membership is symmetric and includes endpoints") {
  Graph g = testutil::random_graph(8, 60);
  AllPairs ap = all_pairs_paths(g);
  for (NodeId s = 0; s < g.node_count(); s += 7)
    for (NodeId t = 0; t < g.node_count(); t += 5) {
      if (!ap.reachable(s, t)) continue;
      CHECK(ap.on_shortest_path(s, s, t));
      CHECK(ap.on_shortest_path(s, t, t));
      for (NodeId x = 0; x < g.node_count(); ++x)
        CHECK(ap.on_shortest_path(s, x, t) == ap.on_shortest_path(t, x, s));
    }
}
