#include "pspt/gen.hpp"

#include <ostream>

#include "pspt/detail/rng.hpp"
#include "pspt/error.hpp"

namespace pspt::gen {

namespace {

double draw_weight(detail::SplitMix64& rng, const WeightRange& w) {
  if (w.unit()) return 1.0;
  if (w.lo == 0 || w.hi < w.lo)
    raise(Errc::invalid_argument, "weight range must satisfy 1 <= lo <= hi");
  return static_cast<double>(w.lo + rng.below(w.hi - w.lo + 1));
}

}  // namespace

EdgeList preferential_attachment(uint64_t n, uint64_t m, uint64_t seed,
                                 WeightRange w) {
  if (m == 0 || n < m)
    raise(Errc::invalid_argument, "preferential attachment needs n >= m >= 1");
  detail::SplitMix64 rng(detail::splitmix64(seed ^ 0x9a0c5e1fu));
  EdgeList edges;
  edges.reserve(m * (n - m));
  std::vector<OrigId> pool;  // one entry per edge endpoint
  pool.reserve(2 * m * (n - m));
  std::vector<OrigId> targets;
  std::vector<uint8_t> taken(n, 0);
  for (uint64_t i = m; i < n; ++i) {
    targets.clear();
    if (pool.empty()) {
      for (uint64_t j = 0; j < m; ++j) targets.push_back(j);
    } else {
      while (targets.size() < m) {
        OrigId cand = pool[rng.below(pool.size())];
        if (cand == i || taken[cand]) continue;
        taken[cand] = 1;
        targets.push_back(cand);
      }
    }
    for (OrigId tgt : targets) {
      taken[tgt] = 0;
      edges.push_back({i, tgt, draw_weight(rng, w)});
      pool.push_back(i);
      pool.push_back(tgt);
    }
  }
  return edges;
}

EdgeList erdos_renyi(uint64_t n, double p, uint64_t seed, WeightRange w) {
  if (p < 0.0 || p > 1.0)
    raise(Errc::invalid_argument, "edge probability must be in [0,1]");
  detail::SplitMix64 rng(detail::splitmix64(seed ^ 0x51ed0e5u));
  EdgeList edges;
  for (uint64_t i = 0; i < n; ++i)
    for (uint64_t j = i + 1; j < n; ++j)
      if (rng.chance(p)) edges.push_back({i, j, draw_weight(rng, w)});
  return edges;
}

EdgeList line(uint64_t n, uint64_t seed, WeightRange w) {
  detail::SplitMix64 rng(detail::splitmix64(seed ^ 0x11aefu));
  EdgeList edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  for (uint64_t i = 0; i + 1 < n; ++i)
    edges.push_back({i, i + 1, draw_weight(rng, w)});
  return edges;
}

EdgeList grid(uint64_t rows, uint64_t cols, uint64_t seed, WeightRange w) {
  detail::SplitMix64 rng(detail::splitmix64(seed ^ 0x62d1dull));
  EdgeList edges;
  auto id = [cols](uint64_t r, uint64_t c) { return r * cols + c; };
  for (uint64_t r = 0; r < rows; ++r)
    for (uint64_t c = 0; c < cols; ++c) {
      if (c + 1 < cols)
        edges.push_back({id(r, c), id(r, c + 1), draw_weight(rng, w)});
      if (r + 1 < rows)
        edges.push_back({id(r, c), id(r + 1, c), draw_weight(rng, w)});
    }
  return edges;
}

void write_edge_list(const EdgeList& edges, std::ostream& out,
                     bool with_weights) {
  for (const Edge& e : edges) {
    out << e.u << ' ' << e.v;
    if (with_weights) out << ' ' << static_cast<uint64_t>(e.w);
    out << '\n';
  }
}

Graph to_graph(const EdgeList& edges, uint64_t n) {
  std::vector<OrigId> all(n);
  for (uint64_t i = 0; i < n; ++i) all[i] = i;
  return make_graph(edges, all);
}

}  // namespace pspt::gen
