#include <doctest.h>

#include <functional>
#include <set>

#include "helpers.hpp"

using namespace pspt;

namespace {

// Brute-force reference for the multi-path rule: enumerate intersection
// candidates in (sum, id) order over the two full shortest path trees and
// apply the visited/simple filters independently of the engine.
std::vector<std::vector<OrigId>> multi_oracle(const Graph& g, OrigId so,
                                              OrigId to, uint64_t beta) {
  PrunedView pv = prune_degree_one(g);
  NodeId s = *g.dense_id(so), t = *g.dense_id(to);
  Pspt ps = build_pspt(g, pv, s, beta);
  Pspt pt = build_pspt(g, pv, t, beta);
  struct C {
    double sum;
    NodeId member;
  };
  std::vector<C> cands;
  for (const PsptEntry& ea : ps.entries)
    for (const PsptEntry& eb : pt.entries)
      if (ea.member == eb.member)
        cands.push_back({ea.distance + eb.distance, ea.member});
  std::sort(cands.begin(), cands.end(), [](const C& a, const C& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    return a.member < b.member;
  });
  std::set<NodeId> visited;
  std::vector<std::vector<OrigId>> out;
  for (const C& c : cands) {
    if (visited.count(c.member)) continue;
    auto left = reconstruct_subpath(ps, c.member);
    auto right = reconstruct_subpath(pt, c.member);
    std::vector<NodeId> whole(left.begin(), left.end());
    whole.insert(whole.end(), right.rbegin() + 1, right.rend());
    std::set<NodeId> uniq(whole.begin(), whole.end());
    if (uniq.size() != whole.size()) continue;
    for (NodeId u : whole) visited.insert(u);
    std::vector<OrigId> orig;
    for (NodeId u : whole) orig.push_back(g.original_id(u));
    out.push_back(orig);
  }
  return out;
}

}  // namespace

TEST_CASE("multi: two-route graph yields both paths in order") {
  Graph g = testutil::two_route_graph();
  Index idx = build_index(g, 4.0);  // beta covers the whole graph
  auto paths = query_multi(idx, g, 0, 2, {});
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].nodes == std::vector<OrigId>{0, 1, 2});
  CHECK(paths[0].length == 2.0);
  CHECK(paths[1].nodes == std::vector<OrigId>{0, 3, 4, 2});
  CHECK(paths[1].length == 3.0);

  auto expect = multi_oracle(g, 0, 2, idx.beta);
  REQUIRE(expect.size() == paths.size());
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(paths[i].nodes == expect[i]);
}

TEST_CASE("multi: disjoint blocks yield nothing") {
  Graph g = gen::to_graph(gen::line(40), 40);
  Index idx = build_index(g, 0.2);  // beta = 2
  auto paths = query_multi(idx, g, 5, 35, {});
  CHECK(paths.empty());
}

TEST_CASE("multi: max_paths truncates to the single-query path") {
  Graph g = testutil::two_route_graph();
  Index idx = build_index(g, 4.0);
  auto paths = query_multi(idx, g, 0, 2, 1);
  REQUIRE(paths.size() == 1);
  QueryOutcome q = query(idx, g, 0, 2, true);
  CHECK(paths[0].nodes == q.path->nodes);
  CHECK(paths[0].length == q.path->length);
  CHECK(query_multi(idx, g, 0, 2, 0).empty());
}

TEST_CASE("multi: agreement with the brute-force rule on random graphs") {
  for (uint64_t seed : {3, 8, 15}) {
    Graph g = testutil::random_graph(seed, 40, 3.5);
    Index idx = build_index(g, 2.0);
    for (NodeId s = 0; s < g.node_count(); s += 5)
      for (NodeId t = 2; t < g.node_count(); t += 7) {
        if (s == t) continue;
        if (!idx.pruned.survives(s) || !idx.pruned.survives(t)) continue;
        auto got = query_multi(idx, g, g.original_id(s), g.original_id(t), {});
        auto expect =
            multi_oracle(g, g.original_id(s), g.original_id(t), idx.beta);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i)
          CHECK(got[i].nodes == expect[i]);
      }
  }
}

TEST_CASE("multi: validity properties") {
  Graph g = testutil::random_graph(4, 120, 4.0);
  Index idx = build_index(g, 2.0);
  for (NodeId s = 0; s < g.node_count(); s += 6)
    for (NodeId t = 3; t < g.node_count(); t += 8) {
      if (s == t) continue;
      OrigId so = g.original_id(s), to = g.original_id(t);
      auto paths = query_multi(idx, g, so, to, {});
      std::set<std::vector<OrigId>> distinct;
      double prev = 0.0;
      for (size_t i = 0; i < paths.size(); ++i) {
        CHECK(testutil::valid_path(g, paths[i], so, to));
        CHECK(testutil::simple_path(paths[i]));
        if (i > 0) CHECK(paths[i].length >= prev);
        prev = paths[i].length;
        distinct.insert(paths[i].nodes);
      }
      CHECK(distinct.size() == paths.size());
      QueryOutcome q = query(idx, g, so, to, true);
      if (!paths.empty() && q.resolution == Resolution::intersection) {
        CHECK(paths[0].nodes == q.path->nodes);
        CHECK(paths[0].length == q.path->length);
      }
    }
}

TEST_CASE("multi: degenerate pairs return the single resolved path") {
  Graph g = testutil::load_text("0 1\n1 2\n0 2\n0 10 3\n0 11 4\n");
  Index idx = build_index(g, 4.0);
  auto same = query_multi(idx, g, 10, 10, {});
  REQUIRE(same.size() == 1);
  CHECK(same[0].nodes == std::vector<OrigId>{10});
  auto anchored = query_multi(idx, g, 10, 11, {});
  REQUIRE(anchored.size() == 1);
  CHECK(anchored[0].nodes == std::vector<OrigId>{10, 0, 11});
}
