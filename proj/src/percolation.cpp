#include "percchem/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "percchem/errors.hpp"
#include "percchem/rng.hpp"

namespace percchem {

namespace {

void fill_open(EdgeSet& open, const FiniteRegion& region, double p, std::uint64_t seed) {
  const std::uint32_t m = region.edge_count();
  std::vector<EdgeSet::block_type> blocks((m + 63) / 64, 0);
  for (std::uint32_t e = 0; e < m; ++e) {
    if (uniform01(seed, e) < p)
      blocks[e >> 6] |= EdgeSet::block_type{1} << (e & 63);
  }
  open.resize(m);
  boost::from_block_range(blocks.begin(), blocks.end(), open);
}

}  // namespace

PercSample sample_config(const FiniteRegion& region, double p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw config_error("percolation parameter must be in [0, 1]");
  PercSample s;
  s.region = &region;
  s.p = p;
  s.seed = seed;
  fill_open(s.open, region, p, seed);
  return s;
}

void resample(PercSample& sample, double p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw config_error("percolation parameter must be in [0, 1]");
  sample.p = p;
  sample.seed = seed;
  fill_open(sample.open, *sample.region, p, seed);
}

ClusterLabeling clusters(const PercSample& sample) {
  const GraphView& g = sample.region->g;
  std::vector<std::uint32_t> root(g.n);
  std::iota(root.begin(), root.end(), 0);
  std::vector<std::uint32_t> rank(g.n, 0);

  auto find = [&](std::uint32_t x) {
    while (root[x] != x) {
      root[x] = root[root[x]];
      x = root[x];
    }
    return x;
  };
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!sample.open.test(e)) continue;
    std::uint32_t a = find(g.ends[e].first);
    std::uint32_t b = find(g.ends[e].second);
    if (a == b) continue;
    if (rank[a] < rank[b]) std::swap(a, b);
    root[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  }

  ClusterLabeling cl;
  cl.label.assign(g.n, 0);
  std::vector<std::uint32_t> comp_of_root(g.n, kNoVertex);
  std::uint32_t next = 0;
  // scanning vertices in id order numbers components by smallest member
  for (VertexId v = 0; v < g.n; ++v) {
    const std::uint32_t r = find(v);
    if (comp_of_root[r] == kNoVertex) {
      comp_of_root[r] = next++;
      cl.size.push_back(0);
    }
    cl.label[v] = comp_of_root[r];
    ++cl.size[cl.label[v]];
  }
  cl.giant = 0;
  for (std::uint32_t c = 1; c < cl.size.size(); ++c)
    if (cl.size[c] > cl.size[cl.giant]) cl.giant = c;
  return cl;
}

int chem_dist(const PercSample& sample, VertexId u, VertexId v, BfsScratch& s,
              EdgeId skip, int max_depth) {
  BfsOptions opt;
  opt.open = &sample.open;
  opt.skip_edge = skip;
  opt.target = v;
  opt.max_depth = max_depth;
  return bfs_run(sample.region->g, u, s, opt);
}

std::optional<int> chemical_distance(const PercSample& sample, VertexId u, VertexId v) {
  if (u >= sample.region->g.n || v >= sample.region->g.n)
    throw config_error("vertex id out of range");
  BfsScratch s;
  const int d = chem_dist(sample, u, v, s);
  if (d < 0) return std::nullopt;
  return d;
}

std::optional<int> chemical_distance_deleted(const PercSample& sample, EdgeId e) {
  if (e >= sample.region->g.edge_count()) throw config_error("edge id out of range");
  const auto [u, v] = sample.region->g.ends[e];
  BfsScratch s;
  const int d = chem_dist(sample, u, v, s, e);
  if (d < 0) return std::nullopt;
  return d;
}

RingHit ring_point_hit(const PercSample& sample, const ClusterLabeling& cl, VertexId u,
                       std::uint64_t tie_seed, BfsScratch& s) {
  const FiniteRegion& region = *sample.region;
  if (u >= region.g.n) throw config_error("vertex id out of range");
  if (2 * region.base_dist[u] > region.radius)
    throw geometry_error("ring point query outside the L/2 core");
  if (cl.size.empty()) throw precondition_error("empty cluster structure");
  if (cl.label[u] == cl.giant) return {u, 0};

  // level-synchronized BFS in the region metric; stop at the first level
  // that contains giant vertices
  s.prepare(region.g.n);
  std::vector<VertexId> frontier{u}, next, hits;
  s.seen.add(u);
  int level = 0;
  while (!frontier.empty()) {
    for (VertexId w : frontier)
      if (cl.label[w] == cl.giant) hits.push_back(w);
    if (!hits.empty()) break;
    next.clear();
    for (VertexId w : frontier) {
      for (VertexId x : region.g.neighbors(w)) {
        if (s.seen.contains(x)) continue;
        s.seen.add(x);
        next.push_back(x);
      }
    }
    frontier.swap(next);
    ++level;
  }
  if (hits.empty()) throw precondition_error("giant cluster unreachable");
  std::sort(hits.begin(), hits.end());
  const double r = uniform01(substream(tie_seed, 0x72696e67ull), u);
  const std::size_t k = std::min(hits.size() - 1,
                                 static_cast<std::size_t>(r * hits.size()));
  return {hits[k], level};
}

VertexId ring_point_core(const PercSample& sample, const ClusterLabeling& cl, VertexId u,
                         std::uint64_t tie_seed, BfsScratch& s) {
  return ring_point_hit(sample, cl, u, tie_seed, s).v;
}

VertexId ring_point(const PercSample& sample, const ClusterLabeling& cl, VertexId u,
                    std::uint64_t tie_seed) {
  BfsScratch s;
  return ring_point_core(sample, cl, u, tie_seed, s);
}

}  // namespace percchem
