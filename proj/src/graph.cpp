#include "percchem/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "percchem/bfs.hpp"
#include "percchem/errors.hpp"

namespace percchem {

const char* family_name(Family f) {
  switch (f) {
    case Family::HypercubicLattice: return "zd";
    case Family::HeisenbergCayley: return "heis";
  }
  return "?";
}

std::optional<EdgeId> GraphView::find_edge(VertexId u, VertexId v) const {
  auto ns = neighbors(u);
  auto it = std::lower_bound(ns.begin(), ns.end(), v);
  if (it == ns.end() || *it != v) return std::nullopt;
  return incident(u)[static_cast<std::size_t>(it - ns.begin())];
}

GraphView GraphView::from_edges(std::uint32_t n,
                                std::vector<std::pair<VertexId, VertexId>> edges) {
  GraphView g;
  g.n = n;
  for (auto& [a, b] : edges) {
    if (a == b) throw config_error("self-loop edge");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.ends = std::move(edges);

  g.off.assign(n + 1, 0);
  for (const auto& [a, b] : g.ends) {
    ++g.off[a + 1];
    ++g.off[b + 1];
  }
  for (std::uint32_t v = 0; v < n; ++v) g.off[v + 1] += g.off[v];
  g.nbr.resize(g.off[n]);
  g.nbr_edge.resize(g.off[n]);
  std::vector<std::uint32_t> cur(g.off.begin(), g.off.end() - 1);
  // ends are sorted, so per-vertex neighbor lists come out sorted for the
  // smaller endpoint; the larger endpoint's list needs the final sort below.
  for (EdgeId e = 0; e < g.ends.size(); ++e) {
    const auto& [a, b] = g.ends[e];
    g.nbr[cur[a]] = b;
    g.nbr_edge[cur[a]++] = e;
    g.nbr[cur[b]] = a;
    g.nbr_edge[cur[b]++] = e;
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    std::vector<std::pair<VertexId, EdgeId>> tmp;
    tmp.reserve(g.off[v + 1] - g.off[v]);
    for (std::uint32_t i = g.off[v]; i < g.off[v + 1]; ++i)
      tmp.emplace_back(g.nbr[i], g.nbr_edge[i]);
    std::sort(tmp.begin(), tmp.end());
    for (std::uint32_t i = g.off[v]; i < g.off[v + 1]; ++i) {
      g.nbr[i] = tmp[i - g.off[v]].first;
      g.nbr_edge[i] = tmp[i - g.off[v]].second;
    }
  }
  return g;
}

// ---- BFS engine ----

int bfs_run(const GraphView& g, VertexId src, BfsScratch& s, const BfsOptions& opt) {
  s.prepare(g.n);
  if (opt.use_mask && !s.mask.contains(src)) return -1;
  s.seen.add(src);
  s.dist[src] = 0;
  s.parent[src] = kNoVertex;
  s.queue.push_back(src);
  if (src == opt.target) return 0;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const VertexId u = s.queue[head];
    const int du = s.dist[u];
    if (opt.max_depth >= 0 && du >= opt.max_depth) continue;
    auto ns = g.neighbors(u);
    auto es = g.incident(u);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const EdgeId e = es[i];
      if (e == opt.skip_edge) continue;
      if (opt.open && !opt.open->test(e)) continue;
      const VertexId v = ns[i];
      if (opt.use_mask && !s.mask.contains(v)) continue;
      if (s.seen.contains(v)) {
        // keep the smallest-id parent at the previous level, so recovered
        // geodesics are canonical regardless of queue interleaving
        if (s.dist[v] == du + 1 && u < s.parent[v]) s.parent[v] = u;
        continue;
      }
      s.seen.add(v);
      s.dist[v] = du + 1;
      s.parent[v] = u;
      s.queue.push_back(v);
      if (v == opt.target) return du + 1;
    }
  }
  if (opt.target != kNoVertex) return -1;
  return 0;
}

void bfs_multi(const GraphView& g, const std::vector<VertexId>& seeds, BfsScratch& s,
               const BfsOptions& opt) {
  s.prepare(g.n);
  for (std::uint32_t i = 0; i < seeds.size(); ++i) {
    const VertexId v = seeds[i];
    if (s.seen.contains(v)) throw config_error("duplicate seed in multi-source BFS");
    s.seen.add(v);
    s.dist[v] = 0;
    s.parent[v] = kNoVertex;
    s.owner[v] = i;
    s.queue.push_back(v);
  }
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const VertexId u = s.queue[head];
    const int du = s.dist[u];
    if (opt.max_depth >= 0 && du >= opt.max_depth) continue;
    auto ns = g.neighbors(u);
    auto es = g.incident(u);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const EdgeId e = es[i];
      if (e == opt.skip_edge) continue;
      if (opt.open && !opt.open->test(e)) continue;
      const VertexId v = ns[i];
      if (opt.use_mask && !s.mask.contains(v)) continue;
      if (s.seen.contains(v)) continue;
      s.seen.add(v);
      s.dist[v] = du + 1;
      s.parent[v] = u;
      s.owner[v] = s.owner[u];
      s.queue.push_back(v);
    }
  }
}

std::vector<VertexId> bfs_path(const GraphView& g, VertexId src, VertexId dst,
                               BfsScratch& s, const BfsOptions& opt) {
  BfsOptions o = opt;
  o.target = dst;
  if (bfs_run(g, src, s, o) < 0) return {};
  std::vector<VertexId> path;
  for (VertexId v = dst;; v = s.parent[v]) {
    path.push_back(v);
    if (v == src) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// ---- region construction ----

std::uint64_t coord_row_hash(std::span<const std::int32_t> c) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::int32_t x : c) {
    std::uint32_t u = static_cast<std::uint32_t>(x);
    for (int k = 0; k < 4; ++k) {
      h ^= (u >> (8 * k)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

namespace {

struct RegionAccum {
  FiniteRegion r;
  std::vector<std::pair<VertexId, VertexId>> edges;

  VertexId find(std::span<const std::int32_t> c) const {
    auto [lo, hi] = r.coord_index.equal_range(coord_row_hash(c));
    for (auto it = lo; it != hi; ++it) {
      auto have = r.coord(it->second);
      if (std::equal(have.begin(), have.end(), c.begin(), c.end())) return it->second;
    }
    return kNoVertex;
  }
  VertexId add(std::span<const std::int32_t> c, std::int32_t dist) {
    const VertexId id = static_cast<VertexId>(r.base_dist.size());
    r.coords.insert(r.coords.end(), c.begin(), c.end());
    r.base_dist.push_back(dist);
    r.coord_index.emplace(coord_row_hash(c), id);
    return id;
  }
};

// exact |B_{Z^d}(L)| = sum_k 2^k C(d,k) C(L,k)
double lattice_ball_count(int d, int L) {
  double total = 0;
  double term = 1;  // k = 0
  for (int k = 0;; ++k) {
    total += term;
    if (k >= d || k >= L) break;
    term *= 2.0 * (d - k) * (L - k) / ((k + 1.0) * (k + 1.0));
  }
  return total;
}

constexpr std::size_t kBytesPerVertex = 96;  // coords+adjacency+index, rough

}  // namespace

std::size_t memory_budget_mb() {
  static const std::size_t budget = [] {
    if (const char* env = std::getenv("PERC_CHEM_BUDGET_MB")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(4096);
  }();
  return budget;
}

FiniteRegion build_lattice(int d, int L) {
  if (d < 1 || d > 8) throw config_error("lattice dimension must be in [1, 8]");
  if (L < 0) throw config_error("lattice radius must be >= 0");
  const double need = lattice_ball_count(d, L);
  const double cap = static_cast<double>(memory_budget_mb()) * 1024.0 * 1024.0 / kBytesPerVertex;
  if (need > cap) {
    throw resource_error("lattice ball needs " + std::to_string(static_cast<std::uint64_t>(need)) +
                         " vertices, over the " + std::to_string(memory_budget_mb()) +
                         " MB budget");
  }

  RegionAccum acc;
  acc.r.family = Family::HypercubicLattice;
  acc.r.dim = d;
  acc.r.radius = L;
  std::vector<std::int32_t> origin(d, 0);
  acc.add(origin, 0);

  std::vector<std::int32_t> nc(d);
  for (VertexId head = 0; head < acc.r.base_dist.size(); ++head) {
    const std::int32_t du = acc.r.base_dist[head];
    // copy: acc.r.coords may reallocate while we append
    std::vector<std::int32_t> cu(acc.r.coord(head).begin(), acc.r.coord(head).end());
    std::int64_t norm = 0;
    for (std::int32_t x : cu) norm += std::abs(x);
    for (int axis = 0; axis < d; ++axis) {
      for (int sgn : {+1, -1}) {
        nc = cu;
        nc[axis] += sgn;
        std::int64_t nn = norm - std::abs(cu[axis]) + std::abs(nc[axis]);
        if (nn > L) continue;
        VertexId v = acc.find(nc);
        if (v == kNoVertex) v = acc.add(nc, du + 1);
        acc.edges.emplace_back(head, v);
      }
    }
  }
  acc.r.g = GraphView::from_edges(static_cast<std::uint32_t>(acc.r.base_dist.size()),
                                  std::move(acc.edges));
  return acc.r;
}

FiniteRegion build_heisenberg(int L) {
  if (L < 0) throw config_error("Heisenberg radius must be >= 0");
  const std::size_t cap =
      memory_budget_mb() * std::size_t{1024} * 1024 / kBytesPerVertex;

  RegionAccum acc;
  acc.r.family = Family::HeisenbergCayley;
  acc.r.dim = 3;
  acc.r.radius = L;
  const std::int32_t id3[3] = {0, 0, 0};
  acc.add({id3, 3}, 0);

  for (VertexId head = 0; head < acc.r.base_dist.size(); ++head) {
    const std::int32_t du = acc.r.base_dist[head];
    if (du >= L) continue;  // neighbors beyond the word ball
    std::array<std::int32_t, 3> u;
    {
      auto c = acc.r.coord(head);
      u = {c[0], c[1], c[2]};
    }
    const std::int32_t a = u[0], b = u[1], c = u[2];
    // right multiplication by X, Y, X^-1, Y^-1
    const std::array<std::array<std::int32_t, 3>, 4> prods = {{
        {a + 1, b, c},
        {a, b + 1, c + a},
        {a - 1, b, c},
        {a, b - 1, c - a},
    }};
    for (const auto& nc : prods) {
      VertexId v = acc.find({nc.data(), 3});
      if (v == kNoVertex) {
        if (acc.r.base_dist.size() >= cap) {
          throw resource_error("Heisenberg ball exceeds " +
                               std::to_string(memory_budget_mb()) + " MB budget at " +
                               std::to_string(acc.r.base_dist.size()) + " vertices");
        }
        v = acc.add({nc.data(), 3}, du + 1);
      }
      acc.edges.emplace_back(head, v);
    }
  }
  acc.r.g = GraphView::from_edges(static_cast<std::uint32_t>(acc.r.base_dist.size()),
                                  std::move(acc.edges));
  return acc.r;
}

std::optional<VertexId> FiniteRegion::vertex_at(std::span<const std::int32_t> c) const {
  if (static_cast<int>(c.size()) != dim) return std::nullopt;
  auto [lo, hi] = coord_index.equal_range(coord_row_hash(c));
  for (auto it = lo; it != hi; ++it) {
    auto have = coord(it->second);
    if (std::equal(have.begin(), have.end(), c.begin(), c.end())) return it->second;
  }
  return std::nullopt;
}

int FiniteRegion::graph_distance(VertexId u, VertexId v) const {
  if (u >= g.n || v >= g.n) throw config_error("vertex id out of range");
  BfsScratch s;
  BfsOptions opt;
  opt.target = v;
  const int d = bfs_run(g, u, s, opt);
  if (d < 0) throw invariant_violation("region is not connected");
  return d;
}

bool FiniteRegion::interior_margin(VertexId u, VertexId v) const {
  const int d = graph_distance(u, v);
  const std::int64_t mu = static_cast<std::int64_t>(base_dist[u]) + d;
  const std::int64_t mv = static_cast<std::int64_t>(base_dist[v]) + d;
  return std::min(mu, mv) <= radius;
}

BallResult ball(const FiniteRegion& region, VertexId v, int r) {
  if (v >= region.g.n) throw config_error("ball center out of range");
  if (r < 0) throw config_error("ball radius must be >= 0");
  BfsScratch s;
  BfsOptions opt;
  opt.max_depth = r;
  bfs_run(region.g, v, s, opt);
  BallResult out;
  out.r = r;
  out.inside.resize(region.g.n);
  for (VertexId u : s.queue) {
    out.inside.set(u);
    if (s.dist[u] == r) out.sphere.push_back(u);
  }
  std::sort(out.sphere.begin(), out.sphere.end());
  return out;
}

std::vector<std::uint64_t> ball_growth(const FiniteRegion& region, int rmax) {
  if (rmax < 0 || rmax > region.radius)
    throw config_error("growth radius must be within the region radius");
  BfsScratch s;
  BfsOptions opt;
  opt.max_depth = rmax;
  bfs_run(region.g, region.base, s, opt);
  std::vector<std::uint64_t> counts(rmax + 1, 0);
  for (VertexId u : s.queue) ++counts[s.dist[u]];
  for (int r = 1; r <= rmax; ++r) counts[r] += counts[r - 1];
  return counts;
}

}  // namespace percchem
