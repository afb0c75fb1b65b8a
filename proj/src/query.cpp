#include "pspt/query.hpp"

#include <algorithm>

#include "pspt/error.hpp"
#include "pspt/kernels/intersect.hpp"
#include "pspt/oracle.hpp"

namespace pspt {

const char* resolution_name(Resolution r) {
  switch (r) {
    case Resolution::trivial: return "trivial";
    case Resolution::intersection: return "intersection";
    case Resolution::fallback: return "fallback";
    case Resolution::unreachable: return "unreachable";
  }
  return "?";
}

namespace {

std::vector<NodeId> subpath_at(const BlockView& block, size_t pos) {
  std::vector<NodeId> seq;
  uint32_t i = static_cast<uint32_t>(pos);
  for (;;) {
    seq.push_back(block.members[i]);
    uint32_t next = block.hops[i];
    if (next == kNoHop) break;
    i = next;
  }
  std::reverse(seq.begin(), seq.end());  // root..w
  return seq;
}

size_t member_pos(const BlockView& block, NodeId w) {
  auto it = std::lower_bound(block.members.begin(), block.members.end(), w);
  if (it == block.members.end() || *it != w)
    raise(Errc::contract_violation, "node is not a member of this block");
  return static_cast<size_t>(it - block.members.begin());
}

struct EndPoint {
  NodeId core = kNoNode;  // surviving endpoint after redirection
  double extra = 0.0;     // redirect edge weight, 0 for survivors
  bool redirected = false;
  bool pair_component = false;  // anchor is itself degree-1
  bool isolated = false;
};

EndPoint resolve_endpoint(const Index& idx, NodeId u) {
  EndPoint ep;
  switch (idx.pruned.tag[u]) {
    case NodeClass::survivor:
      ep.core = u;
      return ep;
    case NodeClass::isolated:
      ep.isolated = true;
      return ep;
    case NodeClass::redirected: {
      NodeId a = idx.pruned.anchor[u];
      if (idx.pruned.tag[a] == NodeClass::survivor) {
        ep.core = a;
        ep.extra = idx.pruned.anchor_weight[u];
        ep.redirected = true;
      } else {
        ep.pair_component = true;  // two degree-1 nodes joined by one edge
      }
      return ep;
    }
  }
  return ep;
}

NodeId require_dense(const Index& idx, OrigId o) {
  auto d = idx.dense_id(o);
  if (!d) raise(Errc::unknown_id, "unknown node id " + std::to_string(o));
  return *d;
}

Path to_original_path(const Index& idx, const std::vector<NodeId>& dense,
                      double length) {
  Path p;
  p.length = length;
  p.nodes.reserve(dense.size());
  for (NodeId u : dense) p.nodes.push_back(idx.id_map[u]);
  return p;
}

// Full dense node sequence s..t through meeting entry (apos in s-core block,
// bpos in t-core block), including redirected endpoints.
std::vector<NodeId> stitch_path(const BlockView& bs, const BlockView& bt,
                                size_t apos, size_t bpos, NodeId s_node,
                                NodeId t_node, bool s_redirected,
                                bool t_redirected) {
  std::vector<NodeId> left = subpath_at(bs, apos);   // s_core..w0
  std::vector<NodeId> right = subpath_at(bt, bpos);  // t_core..w0
  std::vector<NodeId> out;
  out.reserve(left.size() + right.size() + 2);
  if (s_redirected) out.push_back(s_node);
  out.insert(out.end(), left.begin(), left.end());
  out.insert(out.end(), right.rbegin() + 1, right.rend());  // w0 kept once
  if (t_redirected) out.push_back(t_node);
  return out;
}

}  // namespace

QueryOutcome query(const Index& idx, const Graph& g, OrigId s_orig,
                   OrigId t_orig, bool want_path) {
  NodeId s = require_dense(idx, s_orig);
  NodeId t = require_dense(idx, t_orig);

  QueryOutcome out;
  if (s == t) {
    out.distance = 0.0;
    out.resolution = Resolution::trivial;
    if (want_path) out.path = Path{{s_orig}, 0.0};
    return out;
  }

  EndPoint es = resolve_endpoint(idx, s);
  EndPoint et = resolve_endpoint(idx, t);

  // Pair components: the redirect edge is the node's only connection.
  if (es.pair_component || et.pair_component) {
    if (idx.pruned.tag[s] == NodeClass::redirected &&
        idx.pruned.anchor[s] == t) {
      out.distance = idx.pruned.anchor_weight[s];
      out.resolution = Resolution::trivial;
      if (want_path) out.path = Path{{s_orig, t_orig}, *out.distance};
      return out;
    }
    out.resolution = Resolution::unreachable;
    return out;
  }
  if (es.isolated || et.isolated) {
    out.resolution = Resolution::unreachable;
    return out;
  }

  double extra = es.extra + et.extra;
  if (es.core == et.core) {
    // Both endpoints redirect to the same survivor (or one redirects onto
    // the other): the redirect edges are the whole path.
    out.distance = extra;
    out.resolution = Resolution::trivial;
    if (want_path) {
      std::vector<NodeId> dense;
      if (es.redirected) dense.push_back(s);
      dense.push_back(es.core);
      if (et.redirected) dense.push_back(t);
      out.path = to_original_path(idx, dense, extra);
    }
    return out;
  }

  BlockView bs = idx.block(es.core);
  BlockView bt = idx.block(et.core);
  kernels::MinSumHit hit;
  if (kernels::intersect_min_sum(bs.members.data(), bs.dist.data(), bs.size(),
                                 bt.members.data(), bt.dist.data(), bt.size(),
                                 hit)) {
    out.distance = extra + (hit.dist_a + hit.dist_b);
    out.resolution = Resolution::intersection;
    out.meeting_node = idx.id_map[hit.member];
    if (want_path) {
      auto dense = stitch_path(bs, bt, hit.a_pos, hit.b_pos, s, t,
                               es.redirected, et.redirected);
      out.path = to_original_path(idx, dense, *out.distance);
    }
    return out;
  }

  // Disjoint blocks: exact bidirectional search on the original graph so
  // pruned endpoints stay reachable.
  BidirResult br = bidirectional_search(g, s, t);
  if (!br.distance) {
    out.resolution = Resolution::unreachable;
    return out;
  }
  out.distance = br.distance;
  out.resolution = Resolution::fallback;
  if (want_path) {
    Path p;
    p.length = *br.distance;
    p.nodes.reserve(br.path.size());
    for (NodeId u : br.path) p.nodes.push_back(g.original_id(u));
    out.path = std::move(p);
  }
  return out;
}

std::vector<Path> query_multi(const Index& idx, const Graph& g, OrigId s_orig,
                              OrigId t_orig,
                              std::optional<uint64_t> max_paths) {
  std::vector<Path> out;
  if (max_paths && *max_paths == 0) return out;

  NodeId s = require_dense(idx, s_orig);
  NodeId t = require_dense(idx, t_orig);

  EndPoint es = resolve_endpoint(idx, s);
  EndPoint et = resolve_endpoint(idx, t);

  // Degenerate pairs produce at most the one redirect-resolved path.
  if (s == t || es.pair_component || et.pair_component || es.isolated ||
      et.isolated || es.core == et.core) {
    QueryOutcome one = query(idx, g, s_orig, t_orig, true);
    if (one.path) out.push_back(std::move(*one.path));
    return out;
  }

  BlockView bs = idx.block(es.core);
  BlockView bt = idx.block(et.core);
  size_t cap = std::min(bs.size(), bt.size());
  std::vector<uint32_t> pa(cap), pb(cap);
  size_t k = kernels::intersect_positions(bs.members.data(), bs.size(),
                                          bt.members.data(), bt.size(),
                                          pa.data(), pb.data());
  if (k == 0) return out;

  struct Cand {
    double sum;
    NodeId member;
    uint32_t a_pos, b_pos;
  };
  std::vector<Cand> cands;
  cands.reserve(k);
  for (size_t i = 0; i < k; ++i)
    cands.push_back({bs.dist[pa[i]] + bt.dist[pb[i]], bs.members[pa[i]],
                     pa[i], pb[i]});
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.sum != y.sum) return x.sum < y.sum;
    return x.member < y.member;
  });

  double extra = es.extra + et.extra;
  std::vector<uint8_t> visited(idx.node_count(), 0);
  std::vector<uint8_t> on_path(idx.node_count(), 0);
  for (const Cand& c : cands) {
    if (visited[c.member]) continue;
    auto dense = stitch_path(bs, bt, c.a_pos, c.b_pos, s, t, es.redirected,
                             et.redirected);
    bool simple = true;
    for (NodeId u : dense) {
      if (on_path[u]) {
        simple = false;
        break;
      }
      on_path[u] = 1;
    }
    for (NodeId u : dense) on_path[u] = 0;
    if (!simple) continue;  // the two tree paths overlap off the meeting node

    for (NodeId u : dense) visited[u] = 1;
    out.push_back(to_original_path(idx, dense, extra + c.sum));
    if (max_paths && out.size() >= *max_paths) break;
  }
  return out;
}

std::vector<NodeId> reconstruct_subpath(const BlockView& block, NodeId w) {
  return subpath_at(block, member_pos(block, w));
}

std::vector<NodeId> reconstruct_subpath(const Pspt& pspt, NodeId w) {
  std::vector<NodeId> mem(pspt.entries.size());
  std::vector<double> dist(pspt.entries.size());
  std::vector<uint32_t> hops(pspt.entries.size());
  for (size_t i = 0; i < pspt.entries.size(); ++i) {
    mem[i] = pspt.entries[i].member;
    dist[i] = pspt.entries[i].distance;
    hops[i] = pspt.entries[i].first_hop;
  }
  BlockView v{{mem.data(), mem.size()},
              {dist.data(), dist.size()},
              {hops.data(), hops.size()}};
  return reconstruct_subpath(v, w);
}

}  // namespace pspt
