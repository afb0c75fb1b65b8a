#include "pspt/index.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>

#include "pspt/detail/crc32.hpp"
#include "pspt/error.hpp"
#include "pspt/kernels/intersect.hpp"

namespace pspt {

std::optional<NodeId> Index::dense_id(OrigId o) const {
  auto it = std::lower_bound(id_map.begin(), id_map.end(), o);
  if (it == id_map.end() || *it != o) return std::nullopt;
  return static_cast<NodeId>(it - id_map.begin());
}

uint64_t beta_for(double alpha, uint64_t node_count) {
  double b = std::ceil(alpha * std::sqrt(static_cast<double>(node_count)));
  if (!(b >= 1.0)) return 1;
  return static_cast<uint64_t>(b);
}

namespace {

struct HeapItem {
  double d;
  uint32_t key;   // tie key: node id, or its seeded permutation
  uint32_t node;
};

inline bool heap_after(const HeapItem& x, const HeapItem& y) {
  // std::push_heap builds a max-heap; invert to pop the (d, key) minimum.
  if (x.d != y.d) return x.d > y.d;
  return x.key > y.key;
}

// Reusable per-thread Dijkstra state; epoch counters avoid O(n) clears.
struct Scratch {
  std::vector<double> dist;
  std::vector<NodeId> parent;
  std::vector<uint32_t> seen_epoch;
  std::vector<uint32_t> done_epoch;
  std::vector<uint32_t> pos;  // block-local position, valid under done_epoch
  std::vector<HeapItem> heap;
  std::vector<NodeId> settled;
  uint32_t epoch = 0;

  explicit Scratch(uint32_t n)
      : dist(n),
        parent(n),
        seen_epoch(n, 0),
        done_epoch(n, 0),
        pos(n) {}
};

// Settles up to `target` survivors from `root`; returns the settle order.
void truncated_dijkstra(const Graph& g, const PrunedView& pruned, NodeId root,
                        uint64_t target, const std::vector<uint32_t>* tie_perm,
                        Scratch& s) {
  auto key_of = [&](NodeId u) { return tie_perm ? (*tie_perm)[u] : u; };
  ++s.epoch;
  s.heap.clear();
  s.settled.clear();
  s.dist[root] = 0.0;
  s.parent[root] = kNoNode;
  s.seen_epoch[root] = s.epoch;
  s.heap.push_back({0.0, key_of(root), root});

  while (!s.heap.empty() && s.settled.size() < target) {
    std::pop_heap(s.heap.begin(), s.heap.end(), heap_after);
    HeapItem top = s.heap.back();
    s.heap.pop_back();
    NodeId u = top.node;
    if (s.done_epoch[u] == s.epoch) continue;
    if (top.d != s.dist[u]) continue;  // stale entry
    s.done_epoch[u] = s.epoch;
    s.settled.push_back(u);

    auto ns = g.neighbors(u);
    auto ws = g.weights(u);
    double du = s.dist[u];
    for (size_t k = 0; k < ns.size(); ++k) {
      NodeId v = ns[k];
      if (!pruned.survives(v)) continue;
      double nd = du + ws[k];
      if (s.seen_epoch[v] != s.epoch || nd < s.dist[v]) {
        // Strict improvement only: an equal-distance alternative never
        // replaces the first-settled parent.
        s.dist[v] = nd;
        s.parent[v] = u;
        s.seen_epoch[v] = s.epoch;
        s.heap.push_back({nd, key_of(v), v});
        std::push_heap(s.heap.begin(), s.heap.end(), heap_after);
      }
    }
  }
}

// Converts the settle set into a member-sorted block written to the three
// output slices.
void emit_block(Scratch& s, std::span<NodeId> members, std::span<double> dist,
                std::span<uint32_t> hops) {
  std::sort(s.settled.begin(), s.settled.end());
  for (size_t i = 0; i < s.settled.size(); ++i) {
    NodeId u = s.settled[i];
    members[i] = u;
    dist[i] = s.dist[u];
    s.pos[u] = static_cast<uint32_t>(i);
  }
  for (size_t i = 0; i < s.settled.size(); ++i) {
    NodeId p = s.parent[s.settled[i]];
    // Positive weights put every parent strictly earlier in the (distance,
    // id) order, so it is always inside the block.
    hops[i] = (p == kNoNode) ? kNoHop : s.pos[p];
  }
}

// Union-find over survivor-survivor edges; component sizes bound block sizes.
struct Dsu {
  std::vector<NodeId> parent;
  std::vector<uint32_t> size;
  explicit Dsu(uint32_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  NodeId find(NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

Pspt build_pspt(const Graph& g, const PrunedView& pruned, NodeId root,
                uint64_t beta, const std::vector<uint32_t>* tie_perm) {
  if (root >= g.node_count() || !pruned.survives(root))
    raise(Errc::contract_violation, "build_pspt: root must be a survivor");
  if (beta < 1) raise(Errc::contract_violation, "build_pspt: beta >= 1");

  Scratch s(g.node_count());
  truncated_dijkstra(g, pruned, root, beta, tie_perm, s);

  Pspt p;
  p.root = root;
  p.entries.resize(s.settled.size());
  std::vector<NodeId> mem(s.settled.size());
  std::vector<double> dist(s.settled.size());
  std::vector<uint32_t> hops(s.settled.size());
  emit_block(s, mem, dist, hops);
  for (size_t i = 0; i < mem.size(); ++i)
    p.entries[i] = {mem[i], dist[i], hops[i]};
  return p;
}

Index build_index(const Graph& g, double alpha, const BuildOptions& opts) {
  if (!(alpha > 0.0)) raise(Errc::invalid_argument, "alpha must be > 0");
  const uint32_t n = g.node_count();

  Index idx;
  idx.alpha = alpha;
  idx.beta = beta_for(alpha, n);
  idx.id_map = g.id_map;
  idx.pruned = prune_degree_one(g);

  idx.block_idx.assign(n, kNoBlock);
  for (NodeId u = 0; u < n; ++u)
    if (idx.pruned.survives(u)) {
      idx.block_idx[u] = static_cast<uint32_t>(idx.roots.size());
      idx.roots.push_back(u);
    }

  // Block sizes are known up front: min(beta, |component in G'|).
  Dsu dsu(n);
  for (NodeId u = 0; u < n; ++u) {
    if (!idx.pruned.survives(u)) continue;
    for (NodeId v : g.neighbors(u))
      if (v > u && idx.pruned.survives(v)) dsu.unite(u, v);
  }
  idx.block_offsets.assign(idx.roots.size() + 1, 0);
  for (size_t b = 0; b < idx.roots.size(); ++b) {
    uint64_t reach = dsu.size[dsu.find(idx.roots[b])];
    idx.block_offsets[b + 1] =
        idx.block_offsets[b] + std::min<uint64_t>(idx.beta, reach);
  }
  uint64_t total = idx.block_offsets.back();
  idx.members.resize(total);
  idx.dist.resize(total);
  idx.hops.resize(total);

  auto build_range = [&](Scratch& s, size_t lo, size_t hi) {
    for (size_t b = lo; b < hi; ++b) {
      NodeId root = idx.roots[b];
      truncated_dijkstra(g, idx.pruned, root, idx.beta, opts.tie_perm, s);
      uint64_t off = idx.block_offsets[b];
      uint64_t len = idx.block_offsets[b + 1] - off;
      if (s.settled.size() != len)
        raise(Errc::contract_violation, "block size mismatch");
      emit_block(s, {idx.members.data() + off, len}, {idx.dist.data() + off, len},
                 {idx.hops.data() + off, len});
    }
  };

  unsigned threads = opts.threads > 0
                         ? static_cast<unsigned>(opts.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(idx.roots.size(), 1));
  if (threads <= 1) {
    Scratch s(n);
    build_range(s, 0, idx.roots.size());
  } else {
    std::atomic<size_t> next{0};
    constexpr size_t kChunk = 64;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        Scratch s(n);
        for (;;) {
          size_t lo = next.fetch_add(kChunk);
          if (lo >= idx.roots.size()) break;
          build_range(s, lo, std::min(lo + kChunk, idx.roots.size()));
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return idx;
}

std::vector<Candidate> intersect(const BlockView& a, const BlockView& b) {
  std::vector<Candidate> out;
  size_t cap = std::min(a.size(), b.size());
  if (cap == 0) return out;
  std::vector<uint32_t> pa(cap), pb(cap);
  size_t k = kernels::intersect_positions(a.members.data(), a.size(),
                                          b.members.data(), b.size(),
                                          pa.data(), pb.data());
  out.reserve(k);
  for (size_t i = 0; i < k; ++i)
    out.push_back({a.members[pa[i]], a.dist[pa[i]], b.dist[pb[i]]});
  return out;
}

std::vector<Candidate> intersect(const Pspt& a, const Pspt& b) {
  std::vector<NodeId> am(a.entries.size()), bm(b.entries.size());
  std::vector<double> ad(a.entries.size()), bd(b.entries.size());
  std::vector<uint32_t> ah(a.entries.size()), bh(b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    am[i] = a.entries[i].member;
    ad[i] = a.entries[i].distance;
    ah[i] = a.entries[i].first_hop;
  }
  for (size_t i = 0; i < b.entries.size(); ++i) {
    bm[i] = b.entries[i].member;
    bd[i] = b.entries[i].distance;
    bh[i] = b.entries[i].first_hop;
  }
  BlockView va{{am.data(), am.size()}, {ad.data(), ad.size()}, {ah.data(), ah.size()}};
  BlockView vb{{bm.data(), bm.size()}, {bd.data(), bd.size()}, {bh.data(), bh.size()}};
  return intersect(va, vb);
}

// ---------------------------------------------------------------------------
// Serialization. Layout (little-endian):
//   magic "PSPTIDX1"
//   u32 version (= 1)
//   u64 n_original, u64 n_surviving, f64 alpha, u64 beta
//   n_original x u64 original id (ascending)
//   n_original x redirect record: u8 tag; tag==1: u64 anchor, f64 weight
//   n_surviving x block: u64 root, u32 entry_count,
//                        entry_count x (u64 member, f64 distance, u32 hop)
//   u32 crc32 of everything after the magic
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'P', 'S', 'P', 'T', 'I', 'D', 'X', '1'};
constexpr uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void raw(const void* p, size_t len) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(len));
    crc_.update(p, len);
  }
  void u8(uint8_t v) { raw(&v, 1); }
  void u32(uint32_t v) { le(v); }
  void u64(uint64_t v) { le(v); }
  void f64(double v) { le(std::bit_cast<uint64_t>(v)); }
  uint32_t crc() const { return crc_.value(); }
  void magic() {
    out_.write(kMagic, 8);  // not covered by the checksum
  }
  void footer() {
    uint32_t c = crc_.value();
    uint8_t b[4] = {uint8_t(c), uint8_t(c >> 8), uint8_t(c >> 16),
                    uint8_t(c >> 24)};
    out_.write(reinterpret_cast<const char*>(b), 4);
  }

 private:
  template <typename T>
  void le(T v) {
    uint8_t b[sizeof(T)];
    for (size_t i = 0; i < sizeof(T); ++i) b[i] = uint8_t(v >> (8 * i));
    raw(b, sizeof(T));
  }
  std::ostream& out_;
  detail::Crc32 crc_;
};

class Reader {
 public:
  Reader(std::istream& in, uint64_t payload_len)
      : in_(in), remaining_(payload_len) {}
  void raw(void* p, size_t len) {
    if (len > remaining_) raise(Errc::truncated, "index stream ended early");
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(len));
    if (static_cast<size_t>(in_.gcount()) != len)
      raise(Errc::truncated, "index stream ended early");
    remaining_ -= len;
  }
  uint8_t u8() {
    uint8_t v;
    raw(&v, 1);
    return v;
  }
  uint32_t u32() { return le<uint32_t>(); }
  uint64_t u64() { return le<uint64_t>(); }
  double f64() { return std::bit_cast<double>(le<uint64_t>()); }
  uint64_t remaining() const { return remaining_; }

 private:
  template <typename T>
  T le() {
    uint8_t b[sizeof(T)];
    raw(b, sizeof(T));
    T v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) v |= T(b[i]) << (8 * i);
    return v;
  }
  std::istream& in_;
  uint64_t remaining_;
};

[[noreturn]] void bad_index(const std::string& what) {
  raise(Errc::invariant_violation, "index invariant violated: " + what);
}

}  // namespace

uint64_t serialized_size(const Index& idx) {
  uint64_t n = idx.node_count();
  uint64_t sz = 8 + 4 + 8 + 8 + 8 + 8;  // magic + header
  sz += 8 * n;                          // id map
  for (NodeId u = 0; u < n; ++u)
    sz += 1 + (idx.pruned.tag[u] == NodeClass::redirected ? 16 : 0);
  sz += idx.roots.size() * 12;     // root + entry_count
  sz += idx.entry_count() * 20;    // member + distance + hop
  sz += 4;                         // crc footer
  return sz;
}

void serialize(const Index& idx, std::ostream& out) {
  Writer w(out);
  w.magic();
  w.u32(kVersion);
  w.u64(idx.node_count());
  w.u64(idx.roots.size());
  w.f64(idx.alpha);
  w.u64(idx.beta);
  for (OrigId o : idx.id_map) w.u64(o);
  for (NodeId u = 0; u < idx.node_count(); ++u) {
    w.u8(static_cast<uint8_t>(idx.pruned.tag[u]));
    if (idx.pruned.tag[u] == NodeClass::redirected) {
      w.u64(idx.pruned.anchor[u]);
      w.f64(idx.pruned.anchor_weight[u]);
    }
  }
  for (size_t b = 0; b < idx.roots.size(); ++b) {
    BlockView blk = idx.block_at(b);
    w.u64(idx.roots[b]);
    w.u32(static_cast<uint32_t>(blk.size()));
    for (size_t i = 0; i < blk.size(); ++i) {
      w.u64(blk.members[i]);
      w.f64(blk.dist[i]);
      w.u32(blk.hops[i]);
    }
  }
  w.footer();
  if (!out) raise(Errc::io_error, "write failed");
}

Index deserialize(std::istream& in) {
  // Pass 1: magic, then checksum the payload so a flipped byte anywhere is
  // reported as a checksum failure, not a downstream parse error.
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || std::memcmp(magic, kMagic, 8) != 0)
    raise(Errc::bad_magic, "not an index file");

  std::istream::pos_type payload_start = in.tellg();
  if (payload_start == std::istream::pos_type(-1))
    raise(Errc::io_error, "index stream must be seekable");
  in.seekg(0, std::ios::end);
  uint64_t end = static_cast<uint64_t>(in.tellg());
  if (end < static_cast<uint64_t>(payload_start) + 4)
    raise(Errc::truncated, "index stream ended early");
  uint64_t payload_len = end - static_cast<uint64_t>(payload_start) - 4;

  in.seekg(payload_start);
  detail::Crc32 crc;
  {
    std::vector<char> buf(1 << 16);
    uint64_t left = payload_len;
    while (left > 0) {
      size_t take = static_cast<size_t>(std::min<uint64_t>(left, buf.size()));
      in.read(buf.data(), static_cast<std::streamsize>(take));
      if (static_cast<size_t>(in.gcount()) != take)
        raise(Errc::truncated, "index stream ended early");
      crc.update(buf.data(), take);
      left -= take;
    }
  }
  uint8_t cb[4];
  in.read(reinterpret_cast<char*>(cb), 4);
  if (in.gcount() != 4) raise(Errc::truncated, "index stream ended early");
  uint32_t stored = uint32_t(cb[0]) | uint32_t(cb[1]) << 8 |
                    uint32_t(cb[2]) << 16 | uint32_t(cb[3]) << 24;
  if (stored != crc.value())
    raise(Errc::crc_mismatch, "index checksum mismatch");

  // Pass 2: parse.
  in.clear();
  in.seekg(payload_start);
  Reader r(in, payload_len);
  uint32_t version = r.u32();
  if (version != kVersion)
    raise(Errc::bad_version,
          "unsupported index version " + std::to_string(version));

  Index idx;
  uint64_t n = r.u64();
  uint64_t n_surviving = r.u64();
  idx.alpha = r.f64();
  idx.beta = r.u64();
  if (!(idx.alpha > 0.0) || idx.beta < 1) bad_index("alpha/beta");
  if (n > 0xffffffffull || n_surviving > n) bad_index("node counts");

  idx.id_map.resize(n);
  for (uint64_t i = 0; i < n; ++i) {
    idx.id_map[i] = r.u64();
    if (i > 0 && idx.id_map[i] <= idx.id_map[i - 1])
      bad_index("id map not ascending");
  }

  idx.pruned.tag.resize(n);
  idx.pruned.anchor.assign(n, kNoNode);
  idx.pruned.anchor_weight.assign(n, 0.0);
  for (uint64_t u = 0; u < n; ++u) {
    uint8_t tag = r.u8();
    if (tag > 2) bad_index("redirect tag");
    idx.pruned.tag[u] = static_cast<NodeClass>(tag);
    if (tag == 1) {
      uint64_t a = r.u64();
      double wgt = r.f64();
      if (a >= n || a == u) bad_index("redirect anchor");
      if (!(wgt > 0.0) || !std::isfinite(wgt)) bad_index("redirect weight");
      idx.pruned.anchor[u] = static_cast<NodeId>(a);
      idx.pruned.anchor_weight[u] = wgt;
    } else if (tag == 0) {
      ++idx.pruned.survivor_count;
    }
  }
  if (idx.pruned.survivor_count != n_surviving) bad_index("survivor count");

  idx.block_idx.assign(n, kNoBlock);
  idx.roots.reserve(n_surviving);
  idx.block_offsets.assign(1, 0);
  for (uint64_t b = 0; b < n_surviving; ++b) {
    uint64_t root = r.u64();
    uint32_t count = r.u32();
    if (root >= n || idx.pruned.tag[root] != NodeClass::survivor)
      bad_index("block root");
    if (!idx.roots.empty() && root <= idx.roots.back())
      bad_index("block order");
    if (count == 0 || count > idx.beta) bad_index("block size");
    idx.block_idx[root] = static_cast<uint32_t>(idx.roots.size());
    idx.roots.push_back(static_cast<NodeId>(root));
    uint64_t off = idx.block_offsets.back();
    idx.block_offsets.push_back(off + count);
    idx.members.resize(off + count);
    idx.dist.resize(off + count);
    idx.hops.resize(off + count);
    bool saw_root = false;
    for (uint32_t i = 0; i < count; ++i) {
      uint64_t m = r.u64();
      double d = r.f64();
      uint32_t hop = r.u32();
      if (m >= n) bad_index("member id");
      if (i > 0 && m <= idx.members[off + i - 1]) bad_index("member order");
      if (!(d >= 0.0) || !std::isfinite(d)) bad_index("member distance");
      if (m == root) {
        if (d != 0.0 || hop != kNoHop) bad_index("root entry");
        saw_root = true;
      } else if (hop >= count) {
        bad_index("hop out of range");
      }
      idx.members[off + i] = static_cast<NodeId>(m);
      idx.dist[off + i] = d;
      idx.hops[off + i] = hop;
    }
    if (!saw_root) bad_index("missing root entry");
    for (uint32_t i = 0; i < count; ++i) {
      uint32_t hop = idx.hops[off + i];
      if (hop == kNoHop) continue;
      if (idx.dist[off + hop] >= idx.dist[off + i])
        bad_index("hop distance not decreasing");
    }
  }
  if (r.remaining() != 0) bad_index("trailing bytes");
  return idx;
}

void save_index_file(const Index& idx, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_error, "cannot open " + path);
  serialize(idx, out);
  out.flush();
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

Index load_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  return deserialize(in);
}

bool structurally_equal(const Index& a, const Index& b) {
  return a.alpha == b.alpha && a.beta == b.beta && a.id_map == b.id_map &&
         a.pruned.tag == b.pruned.tag && a.pruned.anchor == b.pruned.anchor &&
         a.pruned.anchor_weight == b.pruned.anchor_weight &&
         a.roots == b.roots && a.block_offsets == b.block_offsets &&
         a.members == b.members && a.dist == b.dist && a.hops == b.hops;
}

}  // namespace pspt
