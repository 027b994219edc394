#include "percchem/coarse.hpp"

#include <algorithm>
#include <cmath>

#include "percchem/bfs.hpp"
#include "percchem/errors.hpp"
#include "percchem/rng.hpp"

namespace percchem {

std::vector<VertexId> build_net(const FiniteRegion& region, int r) {
  if (r < 1) throw config_error("net separation must be >= 1");
  std::vector<VertexId> net;
  if (r == 1) {  // every vertex is 1-separated from every other
    net.resize(region.g.n);
    for (VertexId v = 0; v < region.g.n; ++v) net[v] = v;
    return net;
  }
  // blocked(v) <=> v is within distance r-1 of an accepted center
  VertexSet blocked(region.g.n);
  BfsScratch s;
  BfsOptions opt;
  opt.max_depth = r - 1;
  for (VertexId v = 0; v < region.g.n; ++v) {
    if (blocked.test(v)) continue;
    net.push_back(v);
    bfs_run(region.g, v, s, opt);
    for (VertexId w : s.queue) blocked.set(w);
  }
  return net;
}

VoronoiAssignment voronoi_assign(const FiniteRegion& region,
                                 const std::vector<VertexId>& net) {
  if (net.empty()) throw config_error("empty net");
  if (!std::is_sorted(net.begin(), net.end()))
    throw config_error("net must be in ascending id order");
  BfsScratch s;
  BfsOptions opt;
  bfs_multi(region.g, net, s, opt);
  VoronoiAssignment va;
  va.tile_of.assign(region.g.n, kNoVertex);
  va.tile_dist.assign(region.g.n, -1);
  for (VertexId v = 0; v < region.g.n; ++v) {
    if (!s.seen.contains(v)) throw invariant_violation("vertex missed by Voronoi BFS");
    va.tile_of[v] = s.owner[v];
    va.tile_dist[v] = s.dist[v];
  }
  return va;
}

CoarseGraph coarse_graph(const FiniteRegion& region, int R) {
  if (R < 60) throw config_error("coarse scale R must be >= 60");
  CoarseGraph cg;
  cg.region = &region;
  cg.R = R;
  cg.sep = R / 30;
  cg.centers = build_net(region, cg.sep);
  auto va = voronoi_assign(region, cg.centers);
  cg.tile_of = std::move(va.tile_of);
  cg.tile_dist = std::move(va.tile_dist);

  // tiles joined by any region edge become coarse neighbors
  std::vector<std::pair<VertexId, VertexId>> coarse_edges;
  for (EdgeId e = 0; e < region.edge_count(); ++e) {
    const std::uint32_t a = cg.tile_of[region.g.ends[e].first];
    const std::uint32_t b = cg.tile_of[region.g.ends[e].second];
    if (a != b) coarse_edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  cg.g = GraphView::from_edges(cg.center_count(), std::move(coarse_edges));
  cg.max_degree = 0;
  for (std::uint32_t i = 0; i < cg.g.n; ++i)
    cg.max_degree = std::max(cg.max_degree, cg.g.off[i + 1] - cg.g.off[i]);

  cg.interior.assign(cg.center_count(), 0);
  for (std::uint32_t i = 0; i < cg.center_count(); ++i) {
    const std::int64_t m = static_cast<std::int64_t>(region.base_dist[cg.centers[i]]) + R;
    cg.interior[i] = m <= region.radius ? 1 : 0;
  }
  return cg;
}

double coarse_contraction_bound(const CoarseGraph& cg, int n_pairs, std::uint64_t seed) {
  const FiniteRegion& region = *cg.region;
  if (region.radius < 2 * cg.R)
    throw geometry_error("contraction bound needs L >= 2R");
  std::vector<std::uint32_t> interior_idx;
  for (std::uint32_t i = 0; i < cg.center_count(); ++i)
    if (cg.interior[i]) interior_idx.push_back(i);
  if (interior_idx.size() < 2)
    throw geometry_error("not enough interior centers for contraction sampling");

  BfsScratch micro, macro;
  double worst = 0;
  const std::uint64_t key = substream(seed, 0x70616972ull);
  for (int t = 0; t < n_pairs; ++t) {
    const std::size_t na = interior_idx.size();
    std::uint32_t i = static_cast<std::uint32_t>(uniform01(key, 2 * t) * na);
    std::uint32_t j = static_cast<std::uint32_t>(uniform01(key, 2 * t + 1) * na);
    i = interior_idx[std::min<std::size_t>(i, na - 1)];
    j = interior_idx[std::min<std::size_t>(j, na - 1)];
    if (i == j) continue;
    BfsOptions mo;
    mo.target = cg.centers[j];
    const int dg = bfs_run(region.g, cg.centers[i], micro, mo);
    BfsOptions co;
    co.target = j;
    const int dc = bfs_run(cg.g, i, macro, co);
    if (dg <= 0 || dc < 0) continue;
    worst = std::max(worst, static_cast<double>(dc) * cg.R / dg);
  }
  return worst;
}

int default_kprime(const CoarseGraph& cg) {
  const double c = coarse_contraction_bound(cg, 64, 0x6b70ull);
  return 3 * static_cast<int>(std::ceil(c));
}

bool uniqueness_event(const PercSample& sample, VertexId v, int R,
                      std::optional<EdgeId> deleted_edge) {
  const FiniteRegion& region = *sample.region;
  if (R < 10) throw config_error("event scale R must be >= 10");
  if (v >= region.g.n) throw config_error("vertex id out of range");
  if (static_cast<std::int64_t>(region.base_dist[v]) + R > region.radius)
    throw geometry_error("event ball B(v, R) leaves the region");

  const int r10 = R / 10, r5 = R / 5, r2 = R / 2;
  // distances from v; the ball of radius R is the BFS cone
  BfsScratch s;
  BfsOptions opt;
  opt.max_depth = R;
  bfs_run(region.g, v, s, opt);
  std::vector<VertexId> ball_vertices = s.queue;
  std::vector<std::int32_t> dv(region.g.n, -1);
  for (VertexId w : ball_vertices) dv[w] = s.dist[w];

  // open components of the induced subgraph on B(v, R)
  const EdgeId skip = deleted_edge.value_or(kNoEdge);
  BfsScratch cs;
  cs.prepare(region.g.n);
  cs.mask.reset(region.g.n);
  for (VertexId w : ball_vertices) cs.mask.add(w);

  bool crossing = false;
  int crossing_components = 0;
  std::vector<VertexId> comp;
  for (VertexId w : ball_vertices) {
    if (cs.seen.contains(w)) continue;
    // flood one open component inside the ball
    comp.clear();
    comp.push_back(w);
    cs.seen.add(w);
    bool meets_r5 = false, meets_sphere_r2 = false, meets_r10 = false, meets_sphere_R = false;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      const VertexId a = comp[head];
      if (dv[a] <= r5) meets_r5 = true;
      if (dv[a] == r2) meets_sphere_r2 = true;
      if (dv[a] <= r10) meets_r10 = true;
      if (dv[a] == R) meets_sphere_R = true;
      auto ns = region.g.neighbors(a);
      auto es = region.g.incident(a);
      for (std::size_t k = 0; k < ns.size(); ++k) {
        if (es[k] == skip || !sample.open.test(es[k])) continue;
        const VertexId b = ns[k];
        if (!cs.mask.contains(b) || cs.seen.contains(b)) continue;
        cs.seen.add(b);
        comp.push_back(b);
      }
    }
    if (meets_r10 && meets_sphere_R) crossing = true;
    if (meets_r5 && meets_sphere_r2) ++crossing_components;
  }
  const bool unique = crossing_components <= 1;
  if (deleted_edge.has_value()) return unique;  // A' keeps only uniqueness
  return crossing && unique;
}

MacroSiteConfig macro_site_config(const CoarseGraph& cg, const PercSample& sample) {
  if (cg.region != sample.region)
    throw config_error("coarse graph and sample live on different regions");
  MacroSiteConfig msc;
  msc.coarse = &cg;
  msc.sample = &sample;
  msc.memo.assign(cg.center_count(), 3);
  return msc;
}

SiteState MacroSiteConfig::state(std::uint32_t center_idx) const {
  if (center_idx >= coarse->center_count()) throw config_error("center index out of range");
  std::uint8_t& m = memo[center_idx];
  if (m == 3) {
    if (!coarse->interior[center_idx]) {
      m = static_cast<std::uint8_t>(SiteState::Undefined);
    } else {
      const bool open =
          uniqueness_event(*sample, coarse->centers[center_idx], coarse->R);
      m = static_cast<std::uint8_t>(open ? SiteState::Open : SiteState::Closed);
    }
  }
  return static_cast<SiteState>(m);
}

void MacroSiteConfig::materialize() const {
  for (std::uint32_t i = 0; i < coarse->center_count(); ++i) state(i);
}

bool ForbiddenSet::in_anchor(std::uint32_t c) const {
  return std::binary_search(anchor.begin(), anchor.end(), c);
}
bool ForbiddenSet::in_forbidden(std::uint32_t c) const {
  return std::binary_search(closed.begin(), closed.end(), c);
}

namespace {

// centers within coarse distance <= delta of c, ascending
std::vector<std::uint32_t> coarse_ball(const CoarseGraph& cg, std::uint32_t c, int delta,
                                       BfsScratch& s) {
  BfsOptions opt;
  opt.max_depth = delta;
  bfs_run(cg.g, c, s, opt);
  std::vector<std::uint32_t> out(s.queue.begin(), s.queue.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ForbiddenSet forbidden_set(const MacroSiteConfig& msc, VertexId x, VertexId y,
                           int delta, int kprime) {
  const CoarseGraph& cg = *msc.coarse;
  if (delta < 1) throw config_error("delta must be >= 1");
  if (kprime < 1) throw config_error("K' must be >= 1");
  if (x >= cg.region->g.n || y >= cg.region->g.n)
    throw config_error("vertex id out of range");
  ForbiddenSet fs;
  fs.delta = delta;
  fs.kprime = kprime;

  BfsScratch s;
  const std::uint32_t cx = cg.tile_of[x], cy = cg.tile_of[y];
  // anchor: two K' coarse balls plus the canonical coarse geodesic
  std::vector<std::uint32_t> anchor;
  {
    BfsOptions opt;
    opt.max_depth = kprime;
    bfs_run(cg.g, cx, s, opt);
    anchor.insert(anchor.end(), s.queue.begin(), s.queue.end());
    bfs_run(cg.g, cy, s, opt);
    anchor.insert(anchor.end(), s.queue.begin(), s.queue.end());
    BfsOptions geo;
    geo.target = cy;
    if (bfs_run(cg.g, cx, s, geo) < 0)
      throw invariant_violation("coarse graph is not connected");
    for (VertexId v = cy;; v = s.parent[v]) {
      anchor.push_back(v);
      if (v == cx) break;
    }
  }
  std::sort(anchor.begin(), anchor.end());
  anchor.erase(std::unique(anchor.begin(), anchor.end()), anchor.end());
  fs.anchor = std::move(anchor);

  // flood closed Delta-clusters from the closed anchor sites
  fs.flood_parent.assign(cg.center_count(), kNoVertex);
  fs.flood_seed.assign(cg.center_count(), kNoVertex);
  std::vector<std::uint32_t> queue;
  VertexSet in_flood(cg.center_count());
  for (std::uint32_t c : fs.anchor) {
    if (msc.state(c) == SiteState::Closed && !in_flood.test(c)) {
      in_flood.set(c);
      fs.flood_seed[c] = c;
      queue.push_back(c);
    }
  }
  BfsScratch ball_scratch;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t c = queue[head];
    for (std::uint32_t w : coarse_ball(cg, c, delta, ball_scratch)) {
      if (in_flood.test(w)) continue;
      if (msc.state(w) != SiteState::Closed) continue;
      in_flood.set(w);
      fs.flood_parent[w] = c;
      fs.flood_seed[w] = fs.flood_seed[c];
      queue.push_back(w);
    }
  }
  std::sort(queue.begin(), queue.end());
  fs.closed = std::move(queue);
  return fs;
}

double precluster_rho0(std::uint32_t max_degree, int delta) {
  const double dd = std::pow(static_cast<double>(max_degree), delta);
  return 1.0 - 1.0 / (2.0 * dd);
}

std::uint32_t precluster_sample(const CoarseGraph& cg, std::uint32_t center_idx,
                                int delta, double rho, std::uint64_t seed) {
  if (center_idx >= cg.center_count()) throw config_error("center index out of range");
  if (delta < 1) throw config_error("delta must be >= 1");
  if (rho < 0 || rho > 1) throw config_error("site density must be in [0, 1]");
  const std::uint64_t key = substream(seed, 0x70726533ull);
  auto closed = [&](std::uint32_t c) { return uniform01(key, c) >= rho; };
  if (!closed(center_idx)) return 0;

  VertexSet in(cg.center_count());
  in.set(center_idx);
  std::vector<std::uint32_t> queue{center_idx};
  BfsScratch s;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::uint32_t w : coarse_ball(cg, queue[head], delta, s)) {
      if (in.test(w) || !closed(w)) continue;
      in.set(w);
      queue.push_back(w);
    }
  }
  return static_cast<std::uint32_t>(queue.size());
}

}  // namespace percchem
