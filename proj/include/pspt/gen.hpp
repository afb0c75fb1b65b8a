#pragma once

#include <cstdint>
#include <iosfwd>

#include "pspt/graph.hpp"

// Deterministic synthetic graph generators for the experiment harness:
// preferential attachment for social-like degree distributions, G(n,p),
// plus the line/grid structures where block intersection is expected to
// break down.

namespace pspt::gen {

struct WeightRange {
  uint64_t lo = 1, hi = 1;  // uniform integer weights; lo==hi==1 means unit
  bool unit() const { return lo == 1 && hi == 1; }
};

// Nodes 0..m-1 start empty; every later node attaches m edges to distinct
// earlier nodes drawn proportionally to degree (the first arrival links all
// seeds). Emits exactly m*(n-m) edges.
EdgeList preferential_attachment(uint64_t n, uint64_t m, uint64_t seed,
                                 WeightRange w = {});

EdgeList erdos_renyi(uint64_t n, double p, uint64_t seed, WeightRange w = {});

EdgeList line(uint64_t n, uint64_t seed = 0, WeightRange w = {});

EdgeList grid(uint64_t rows, uint64_t cols, uint64_t seed = 0,
              WeightRange w = {});

void write_edge_list(const EdgeList& edges, std::ostream& out,
                     bool with_weights);

// Builds the Graph with all of 0..n-1 present, keeping isolated nodes that a
// plain edge list would lose.
Graph to_graph(const EdgeList& edges, uint64_t n);

}  // namespace pspt::gen
