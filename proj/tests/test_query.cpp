#include <doctest.h>

#include "helpers.hpp"
#include "pspt/error.hpp"
#include "pspt/eval.hpp"

using namespace pspt;

TEST_CASE("query: identity") {
  Graph g = testutil::demo16_graph();
  Index idx = build_index(g, 1.25);
  QueryOutcome q = query(idx, g, 7, 7, true);
  CHECK(q.resolution == Resolution::trivial);
  CHECK(*q.distance == 0.0);
  CHECK(q.path->nodes == std::vector<OrigId>{7});
}

TEST_CASE("query: demo16 redirected endpoint") {
  Graph g = testutil::demo16_graph();
  Index idx = build_index(g, 1.25);
  QueryOutcome q = query(idx, g, 3, 1, true);
  REQUIRE(q.distance.has_value());
  CHECK(*q.distance == 2.0);
  CHECK(q.path->nodes == std::vector<OrigId>{3, 2, 1});
  // Against the oracle on the same graph.
  auto br = bidirectional_search(g, *g.dense_id(3), *g.dense_id(1));
  CHECK(*q.distance == *br.distance);
}

TEST_CASE("query: demo16 both-redirected long pair") {
  Graph g = testutil::demo16_graph();
  Index idx = build_index(g, 1.25);
  QueryOutcome q = query(idx, g, 3, 15, true);
  REQUIRE(q.resolution == Resolution::intersection);
  CHECK(*q.distance == 5.0);
  CHECK(q.path->nodes == std::vector<OrigId>{3, 2, 1, 9, 10, 15});
  CHECK(*q.meeting_node == 1);  // sum tie against 2, smaller id wins
  CHECK(testutil::valid_path(g, *q.path, 3, 15));
}

TEST_CASE("query: tie-detour graph is exactly one hop longer") {
  auto tg = testutil::tie_detour_graph();
  Index idx = build_index(tg.g, tg.alpha);
  REQUIRE(idx.beta == 4);
  QueryOutcome q = query(idx, tg.g, tg.s, tg.t, true);
  REQUIRE(q.resolution == Resolution::intersection);
  CHECK(*q.distance == tg.returned);
  CHECK(*q.distance == tg.oracle + 1.0);  // unweighted: at most one hop more
  CHECK(testutil::valid_path(tg.g, *q.path, tg.s, tg.t));
  CHECK(*q.meeting_node == 0);
}

TEST_CASE("query: weighted detour stays within the heaviest-edge bound") {
  auto wg = testutil::weighted_detour_graph();
  Index idx = build_index(wg.g, wg.alpha);
  REQUIRE(idx.beta == 7);
  QueryOutcome q = query(idx, wg.g, wg.s, wg.t, true);
  REQUIRE(q.resolution == Resolution::intersection);
  CHECK(*q.distance == wg.returned);
  CHECK(*q.distance > wg.oracle);
  eval::WmaxCache wmax(idx, wg.g);
  CHECK(*q.distance <= wg.oracle + wmax.for_core(*wg.g.dense_id(wg.s)));
  CHECK(testutil::valid_path(wg.g, *q.path, wg.s, wg.t));
}

TEST_CASE("query: disconnected pair is unreachable") {
  Graph g = gen::to_graph({{0, 1, 1}, {1, 2, 1}, {5, 6, 1}, {6, 7, 1}}, 8);
  Index idx = build_index(g, 0.1);
  QueryOutcome q = query(idx, g, 0, 7, true);
  CHECK(q.resolution == Resolution::unreachable);
  CHECK(!q.distance.has_value());
  CHECK(!q.path.has_value());
}

TEST_CASE("query: pair component") {
  Graph g = testutil::load_text("1 2 2.5\n5 6\n5 7\n6 7\n");
  Index idx = build_index(g, 4.0);
  QueryOutcome direct = query(idx, g, 1, 2, true);
  CHECK(direct.resolution == Resolution::trivial);
  CHECK(*direct.distance == 2.5);
  CHECK(direct.path->nodes == std::vector<OrigId>{1, 2});

  QueryOutcome far = query(idx, g, 1, 5, false);
  CHECK(far.resolution == Resolution::unreachable);
}

TEST_CASE("query: endpoints redirecting to the same anchor") {
  // Leaves 10 and 11 both hang off hub 0 of a triangle.
  Graph g = testutil::load_text("0 1\n1 2\n0 2\n0 10 3\n0 11 4\n");
  Index idx = build_index(g, 4.0);
  QueryOutcome q = query(idx, g, 10, 11, true);
  CHECK(q.resolution == Resolution::trivial);
  CHECK(*q.distance == 7.0);
  CHECK(q.path->nodes == std::vector<OrigId>{10, 0, 11});

  QueryOutcome onto = query(idx, g, 10, 0, true);
  CHECK(onto.resolution == Resolution::trivial);
  CHECK(*onto.distance == 3.0);
  CHECK(onto.path->nodes == std::vector<OrigId>{10, 0});
}

TEST_CASE("query: isolated endpoint") {
  Graph g = gen::to_graph({{0, 1, 1}, {1, 2, 1}}, 4);
  Index idx = build_index(g, 4.0);
  QueryOutcome q = query(idx, g, 3, 0, false);
  CHECK(q.resolution == Resolution::unreachable);
  QueryOutcome same = query(idx, g, 3, 3, false);
  CHECK(same.resolution == Resolution::trivial);
  CHECK(*same.distance == 0.0);
}

TEST_CASE("query: unknown ids raise") {
  Graph g = testutil::demo16_graph();
  Index idx = build_index(g, 1.25);
  try {
    query(idx, g, 1, 999, false);
    FAIL("expected unknown_id");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_id);
  }
}

TEST_CASE("query: want_path=false omits the path") {
  Graph g = testutil::demo16_graph();
  Index idx = build_index(g, 1.25);
  QueryOutcome q = query(idx, g, 3, 15, false);
  CHECK(q.distance.has_value());
  CHECK(!q.path.has_value());
}

TEST_CASE("query: exact whenever blocks intersect along a shortest path") {
  for (uint64_t seed : {1, 2, 3, 4}) {
    Graph g = testutil::random_graph(seed, 120, 3.0);
    AllPairs ap = all_pairs_paths(g);
    for (double alpha : {0.5, 1.0, 2.0}) {
      Index idx = build_index(g, alpha);
      eval::WmaxCache wmax(idx, g);
      for (NodeId s = 0; s < g.node_count(); s += 3)
        for (NodeId t = 0; t < g.node_count(); t += 2) {
          if (s == t) continue;
          OrigId so = g.original_id(s), to = g.original_id(t);
          std::optional<double> oracle;
          if (ap.reachable(s, t)) oracle = ap.at(s, t);
          auto pc = eval::classify_pair(idx, g, so, to, oracle, wmax);
          if (pc.along_sp) CHECK(*pc.engine_distance == *oracle);
          if (pc.intersecting) CHECK(pc.within_bound);
          if (pc.resolution == Resolution::fallback)
            CHECK(*pc.engine_distance == *oracle);
          if (pc.resolution == Resolution::unreachable)
            CHECK(!oracle.has_value());
        }
    }
  }
}

TEST_CASE("query: distance is symmetric") {
  Graph g = testutil::random_graph(14, 90, 3.0);
  Index idx = build_index(g, 1.0);
  for (NodeId s = 0; s < g.node_count(); s += 4)
    for (NodeId t = 0; t < g.node_count(); t += 3) {
      auto a = query(idx, g, g.original_id(s), g.original_id(t), false);
      auto b = query(idx, g, g.original_id(t), g.original_id(s), false);
      CHECK(a.distance == b.distance);
      CHECK(a.resolution == b.resolution);
    }
}

TEST_CASE("query: intersection count never drops as alpha doubles") {
  Graph g = testutil::random_graph(23, 150, 3.0);
  std::vector<std::pair<OrigId, OrigId>> pairs;
  for (NodeId s = 0; s < g.node_count(); s += 2)
    for (NodeId t = 1; t < g.node_count(); t += 5)
      if (s != t) pairs.emplace_back(g.original_id(s), g.original_id(t));
  uint64_t prev = 0;
  bool first = true;
  for (double alpha : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0}) {
    Index idx = build_index(g, alpha);
    uint64_t hits = 0;
    for (auto [s, t] : pairs)
      hits += query(idx, g, s, t, false).resolution == Resolution::intersection;
    if (!first) CHECK(hits >= prev);
    prev = hits;
    first = false;
  }
}

TEST_CASE("reconstruct_subpath: root, weights, termination") {
  Graph g = testutil::random_graph(19, 50, 3.0);
  Index idx = build_index(g, 2.0);
  for (NodeId root : idx.roots) {
    BlockView blk = idx.block(root);
    auto self = reconstruct_subpath(blk, root);
    CHECK(self == std::vector<NodeId>{root});
    for (size_t i = 0; i < blk.size(); ++i) {
      auto seq = reconstruct_subpath(blk, blk.members[i]);
      REQUIRE(!seq.empty());
      CHECK(seq.front() == root);
      CHECK(seq.back() == blk.members[i]);
      CHECK(seq.size() <= blk.size());
      double len = 0.0;
      for (size_t k = 0; k + 1 < seq.size(); ++k) {
        auto w = g.edge_weight(seq[k], seq[k + 1]);
        REQUIRE(w.has_value());
        len += *w;
      }
      CHECK(len == blk.dist[i]);
    }
  }
}

TEST_CASE("reconstruct_subpath rejects non-members") {
  Graph g = testutil::demo16_graph();
  Index idx = build_index(g, 1.25);
  BlockView blk = idx.block(*g.dense_id(1));
  CHECK_THROWS_AS(reconstruct_subpath(blk, *g.dense_id(10)), Error);
}
