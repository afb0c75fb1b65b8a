#include "pspt/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "pspt/error.hpp"

namespace pspt {

std::optional<NodeId> Graph::dense_id(OrigId o) const {
  auto it = std::lower_bound(id_map.begin(), id_map.end(), o);
  if (it == id_map.end() || *it != o) return std::nullopt;
  return static_cast<NodeId>(it - id_map.begin());
}

std::optional<double> Graph::edge_weight(NodeId u, NodeId v) const {
  auto ns = neighbors(u);
  auto it = std::lower_bound(ns.begin(), ns.end(), v);
  if (it == ns.end() || *it != v) return std::nullopt;
  return wgt[offsets[u] + static_cast<uint64_t>(it - ns.begin())];
}

Graph make_graph(std::span<const Edge> edges,
                 std::span<const OrigId> extra_nodes) {
  Graph g;
  uint64_t self_loops = 0;

  // Canonical (min,max) endpoint order, then sort to collapse duplicates.
  struct Raw {
    OrigId a, b;
    double w;
  };
  std::vector<Raw> raw;
  raw.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      raise(Errc::invalid_weight, "edge weight must be a positive finite value");
    if (e.u == e.v) {
      ++self_loops;
      continue;
    }
    raw.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& x, const Raw& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.w < y.w;
  });

  uint64_t duplicates = 0;
  std::vector<Raw> dedup;
  dedup.reserve(raw.size());
  for (const Raw& r : raw) {
    if (!dedup.empty() && dedup.back().a == r.a && dedup.back().b == r.b) {
      ++duplicates;  // min weight kept: sorted so the first one wins
    } else {
      dedup.push_back(r);
    }
  }

  std::vector<OrigId> ids;
  ids.reserve(dedup.size() * 2 + extra_nodes.size());
  for (const Raw& r : dedup) {
    ids.push_back(r.a);
    ids.push_back(r.b);
  }
  ids.insert(ids.end(), extra_nodes.begin(), extra_nodes.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  g.id_map = std::move(ids);

  const uint32_t n = g.node_count();
  auto dense = [&](OrigId o) {
    return static_cast<NodeId>(
        std::lower_bound(g.id_map.begin(), g.id_map.end(), o) -
        g.id_map.begin());
  };

  std::vector<uint32_t> deg(n, 0);
  for (const Raw& r : dedup) {
    ++deg[dense(r.a)];
    ++deg[dense(r.b)];
  }
  g.offsets.assign(n + 1, 0);
  for (uint32_t u = 0; u < n; ++u) g.offsets[u + 1] = g.offsets[u] + deg[u];
  g.nbr.resize(g.offsets[n]);
  g.wgt.resize(g.offsets[n]);

  std::vector<uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const Raw& r : dedup) {
    NodeId a = dense(r.a), b = dense(r.b);
    g.nbr[cursor[a]] = b;
    g.wgt[cursor[a]++] = r.w;
    g.nbr[cursor[b]] = a;
    g.wgt[cursor[b]++] = r.w;
  }
  for (uint32_t u = 0; u < n; ++u) {
    // Sort each adjacency row by neighbor id.
    uint64_t lo = g.offsets[u], hi = g.offsets[u + 1];
    std::vector<std::pair<NodeId, double>> row;
    row.reserve(hi - lo);
    for (uint64_t i = lo; i < hi; ++i) row.emplace_back(g.nbr[i], g.wgt[i]);
    std::sort(row.begin(), row.end());
    for (uint64_t i = lo; i < hi; ++i) {
      g.nbr[i] = row[i - lo].first;
      g.wgt[i] = row[i - lo].second;
    }
  }

  g.self_loops_dropped = self_loops;
  g.duplicates_collapsed = duplicates;
  return g;
}

namespace {

bool parse_u64(std::string_view tok, uint64_t& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

bool parse_f64(std::string_view tok, double& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  EdgeList edges;
  std::string line;
  uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;

    std::string_view rest(line.data() + pos, line.size() - pos);
    std::string_view tok[4];
    int ntok = 0;
    while (!rest.empty() && ntok < 4) {
      size_t end = rest.find_first_of(" \t\r");
      tok[ntok++] = rest.substr(0, end);
      if (end == std::string_view::npos) {
        rest = {};
      } else {
        rest = rest.substr(end);
        size_t next = rest.find_first_not_of(" \t\r");
        rest = (next == std::string_view::npos) ? std::string_view{}
                                                : rest.substr(next);
      }
    }
    if (ntok < 2 || ntok > 3)
      raise(Errc::parse_error,
            "line " + std::to_string(lineno) + ": expected 'u v' or 'u v w'");

    Edge e;
    if (!parse_u64(tok[0], e.u) || !parse_u64(tok[1], e.v))
      raise(Errc::parse_error,
            "line " + std::to_string(lineno) + ": bad node id");
    if (ntok == 3) {
      if (!parse_f64(tok[2], e.w))
        raise(Errc::parse_error,
              "line " + std::to_string(lineno) + ": bad weight");
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        raise(Errc::invalid_weight, "line " + std::to_string(lineno) +
                                        ": weight must be positive");
    }
    edges.push_back(e);
  }
  return make_graph(edges);
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  return load_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  char buf[64];
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto ns = g.neighbors(u);
    auto ws = g.weights(u);
    for (size_t i = 0; i < ns.size(); ++i) {
      if (ns[i] < u) continue;  // each undirected edge once
      out << g.original_id(u) << ' ' << g.original_id(ns[i]);
      if (ws[i] != 1.0) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, ws[i]);
        (void)ec;
        out << ' ' << std::string_view(buf, p - buf);
      }
      out << '\n';
    }
  }
}

PrunedView prune_degree_one(const Graph& g) {
  const uint32_t n = g.node_count();
  PrunedView pv;
  pv.tag.resize(n);
  pv.anchor.assign(n, kNoNode);
  pv.anchor_weight.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    uint32_t d = g.degree(u);
    if (d >= 2) {
      pv.tag[u] = NodeClass::survivor;
      ++pv.survivor_count;
    } else if (d == 1) {
      pv.tag[u] = NodeClass::redirected;
      pv.anchor[u] = g.neighbors(u)[0];
      pv.anchor_weight[u] = g.weights(u)[0];
    } else {
      pv.tag[u] = NodeClass::isolated;
    }
  }
  return pv;
}

}  // namespace pspt
