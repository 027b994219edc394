#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "percchem/bfs.hpp"
#include "percchem/coarse.hpp"
#include "percchem/errors.hpp"
#include "percchem/graph.hpp"
#include "percchem/percolation.hpp"
#include "percchem/stats.hpp"

using namespace percchem;

namespace {

std::vector<int> distances_from(const GraphView& g, VertexId src) {
  BfsScratch s;
  bfs_run(g, src, s, {});
  std::vector<int> d(g.n, -1);
  for (VertexId v : s.queue) d[v] = s.dist[v];
  return d;
}

}  // namespace

TEST_CASE("separated nets are maximal, separated, and sorted") {
  const FiniteRegion region = build_lattice(2, 8);
  for (int r : {2, 3, 4}) {
    CAPTURE(r);
    const auto net = build_net(region, r);
    CHECK(std::is_sorted(net.begin(), net.end()));
    VertexSet in_net(region.vertex_count());
    for (VertexId v : net) in_net.set(v);
    std::vector<int> cover(region.vertex_count(), 0);
    for (VertexId c : net) {
      const auto d = distances_from(region.g, c);
      for (VertexId v = 0; v < region.vertex_count(); ++v) {
        // separation: no other net point within distance r - 1
        if (in_net.test(v) && v != c) CHECK(d[v] >= r);
        if (d[v] <= r - 1) cover[v] = 1;
      }
    }
    // maximality: every vertex is within r - 1 of an accepted point
    for (VertexId v = 0; v < region.vertex_count(); ++v) CHECK(cover[v] == 1);
  }
  CHECK(build_net(region, 1).size() == region.vertex_count());
  CHECK_THROWS_AS(build_net(region, 0), config_error);
}

TEST_CASE("tiles hold nearest centers with smallest-index ties") {
  const FiniteRegion region = build_lattice(2, 8);
  const auto net = build_net(region, 3);
  const auto va = voronoi_assign(region, net);
  std::vector<std::vector<int>> dist_to;
  for (VertexId c : net) dist_to.push_back(distances_from(region.g, c));
  for (VertexId v = 0; v < region.vertex_count(); ++v) {
    int best = dist_to[0][v];
    std::uint32_t owner = 0;
    for (std::uint32_t i = 1; i < net.size(); ++i) {
      if (dist_to[i][v] < best) {
        best = dist_to[i][v];
        owner = i;
      }
    }
    CHECK(va.tile_dist[v] == best);
    CHECK(va.tile_of[v] == owner);
  }
  auto shuffled = net;
  std::swap(shuffled.front(), shuffled.back());
  CHECK_THROWS_AS(voronoi_assign(region, shuffled), config_error);
}

TEST_CASE("tiles are star-shaped around their centers") {
  const FiniteRegion region = build_lattice(2, 10);
  const auto net = build_net(region, 3);
  const auto va = voronoi_assign(region, net);
  for (VertexId v = 0; v < region.vertex_count(); ++v) {
    if (va.tile_dist[v] == 0) continue;
    bool parent = false;
    for (VertexId w : region.g.neighbors(v))
      if (va.tile_of[w] == va.tile_of[v] && va.tile_dist[w] == va.tile_dist[v] - 1)
        parent = true;
    CHECK(parent);
  }
}

TEST_CASE("the coarse graph is the exact tile-adjacency quotient") {
  const FiniteRegion region = build_lattice(2, 90);
  const CoarseGraph cg = coarse_graph(region, 60);
  CHECK(cg.sep == 2);
  std::set<std::pair<VertexId, VertexId>> expect;
  for (EdgeId e = 0; e < region.edge_count(); ++e) {
    const std::uint32_t a = cg.tile_of[region.g.ends[e].first];
    const std::uint32_t b = cg.tile_of[region.g.ends[e].second];
    if (a != b) expect.emplace(std::min(a, b), std::max(a, b));
  }
  REQUIRE(cg.g.edge_count() == expect.size());
  for (const auto& ab : cg.g.ends) CHECK(expect.count(ab) == 1);
  // touching tiles have centers within 2 sep + 1
  for (std::size_t k = 0; k < cg.g.ends.size(); k += 97) {
    const auto [i, j] = cg.g.ends[k];
    CHECK(region.graph_distance(cg.centers[i], cg.centers[j]) <= 2 * cg.sep + 1);
  }
  std::uint32_t deg = 0;
  for (std::uint32_t i = 0; i < cg.g.n; ++i)
    deg = std::max(deg, cg.g.off[i + 1] - cg.g.off[i]);
  CHECK(cg.max_degree == deg);
  // interior flags match the ball-containment definition
  for (std::uint32_t i = 0; i < cg.center_count(); i += 53) {
    const bool fits =
        static_cast<std::int64_t>(region.base_dist[cg.centers[i]]) + cg.R <= region.radius;
    CHECK(static_cast<bool>(cg.interior[i]) == fits);
  }
  CHECK_THROWS_AS(coarse_graph(region, 59), config_error);
}

TEST_CASE("tiles sandwich between the inner and outer balls") {
  // R = 120 gives inner radius 1, the first scale where the inner ball
  // holds more than the center itself
  const FiniteRegion region = build_lattice(2, 130);
  const CoarseGraph cg = coarse_graph(region, 120);
  const int inner_r = cg.R / 60 - 1;
  REQUIRE(inner_r == 1);
  CHECK(cg.sep == 4);
  BfsScratch s;
  BfsOptions opt;
  opt.max_depth = inner_r;
  for (std::uint32_t c = 0; c < cg.center_count(); ++c) {
    bfs_run(region.g, cg.centers[c], s, opt);
    for (VertexId w : s.queue) CHECK(cg.tile_of[w] == c);
  }
  for (VertexId v = 0; v < region.vertex_count(); ++v) CHECK(cg.tile_dist[v] <= cg.sep);
}

TEST_CASE("coarse distances never beat scaled region distances") {
  const FiniteRegion region = build_lattice(2, 120);
  const CoarseGraph cg = coarse_graph(region, 60);
  const double bound = coarse_contraction_bound(cg, 64, 0xc0a5ull);
  CHECK(bound > 0);
  CHECK(bound <= cg.R);
  CHECK(bound == coarse_contraction_bound(cg, 64, 0xc0a5ull));
  const int kprime = default_kprime(cg);
  CHECK(kprime >= 3);
  CHECK(kprime <= 3 * cg.R);
  // the walk through consecutive tiles of a geodesic certifies the ceiling
  std::vector<std::uint32_t> interior_idx;
  for (std::uint32_t i = 0; i < cg.center_count(); ++i)
    if (cg.interior[i]) interior_idx.push_back(i);
  BfsScratch s;
  for (std::size_t k = 0; k + 1 < interior_idx.size(); k += interior_idx.size() / 17) {
    const std::uint32_t i = interior_idx[k], j = interior_idx[interior_idx.size() - 1 - k];
    if (i == j) continue;
    BfsOptions micro;
    micro.target = cg.centers[j];
    const int dg = bfs_run(region.g, cg.centers[i], s, micro);
    BfsOptions macro;
    macro.target = j;
    const int dc = bfs_run(cg.g, i, s, macro);
    REQUIRE(dg > 0);
    REQUIRE(dc >= 0);
    CHECK(dc <= dg);
  }
  const FiniteRegion tight = build_lattice(2, 90);
  CHECK_THROWS_AS(coarse_contraction_bound(coarse_graph(tight, 60), 8, 1), geometry_error);
}

TEST_CASE("the crossing-uniqueness event at the degenerate densities") {
  const FiniteRegion region = build_lattice(2, 90);
  const PercSample full = sample_config(region, 1.0, 0);
  const PercSample empty = sample_config(region, 0.0, 0);
  CHECK(uniqueness_event(full, region.base, 60));
  CHECK_FALSE(uniqueness_event(empty, region.base, 60));
  // the deleted-edge variant keeps only the uniqueness clause
  const EdgeId e0 = region.g.incident(region.base)[0];
  CHECK(uniqueness_event(full, region.base, 60, e0));
  CHECK(uniqueness_event(empty, region.base, 60, e0));
  CHECK_THROWS_AS(uniqueness_event(full, region.base, 9), config_error);
  VertexId boundary = 0;
  while (region.base_dist[boundary] + 60 <= region.radius) ++boundary;
  CHECK_THROWS_AS(uniqueness_event(full, boundary, 60), geometry_error);
}

TEST_CASE("the event reads only edges inside its ball") {
  const FiniteRegion region = build_lattice(2, 90);
  const BallResult b = ball(region, region.base, 60);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PercSample s = sample_config(region, 0.5, seed);
    const bool before = uniqueness_event(s, region.base, 60);
    // flip every edge whose endpoints both lie outside B(base, 60)
    std::size_t flipped = 0;
    for (EdgeId e = 0; e < region.edge_count(); ++e) {
      const auto [u, v] = region.g.ends[e];
      if (!b.inside.test(u) && !b.inside.test(v)) {
        s.open.flip(e);
        ++flipped;
      }
    }
    REQUIRE(flipped > 0);
    CHECK(uniqueness_event(s, region.base, 60) == before);
  }
}

TEST_CASE("macro sites are open far above criticality and undefined on the rim") {
  const FiniteRegion region = build_lattice(2, 90);
  const CoarseGraph cg = coarse_graph(region, 60);
  int open = 0, probed = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PercSample s = sample_config(region, 0.8, seed);
    const MacroSiteConfig msc = macro_site_config(cg, s);
    for (std::uint32_t c = 0; c < cg.center_count() && probed < 300 * (seed + 1); ++c) {
      if (!cg.interior[c]) {
        CHECK(msc.state(c) == SiteState::Undefined);
        continue;
      }
      ++probed;
      if (msc.state(c) == SiteState::Open) ++open;
      CHECK(msc.state(c) == msc.state(c));
    }
  }
  CHECK(static_cast<double>(open) >= 0.95 * probed);
  const PercSample empty = sample_config(region, 0.0, 0);
  const MacroSiteConfig closed_msc = macro_site_config(cg, empty);
  std::uint32_t c0 = 0;
  while (!cg.interior[c0]) ++c0;
  CHECK(closed_msc.state(c0) == SiteState::Closed);
  const FiniteRegion other = build_lattice(2, 60);
  const PercSample foreign = sample_config(other, 0.5, 0);
  CHECK_THROWS_AS(macro_site_config(cg, foreign), config_error);
}

TEST_CASE("the forbidden set is the union of closed clusters meeting the anchor") {
  const FiniteRegion region = build_lattice(2, 90);
  const CoarseGraph cg = coarse_graph(region, 60);
  const std::int32_t xc[2] = {-20, 0}, yc[2] = {20, 0};
  const VertexId x = *region.vertex_at({xc, 2});
  const VertexId y = *region.vertex_at({yc, 2});
  const int delta = 2, kprime = 6;

  // a full-density sample leaves nothing closed
  const PercSample full = sample_config(region, 1.0, 0);
  MacroSiteConfig msc_full = macro_site_config(cg, full);
  const ForbiddenSet none = forbidden_set(msc_full, x, y, delta, kprime);
  CHECK(none.closed.empty());
  CHECK(std::is_sorted(none.anchor.begin(), none.anchor.end()));
  CHECK(none.in_anchor(cg.tile_of[x]));
  CHECK(none.in_anchor(cg.tile_of[y]));
  CHECK_FALSE(none.in_forbidden(cg.tile_of[x]));

  // a mixed sample: compare against an independent flood oracle
  const PercSample s = sample_config(region, 0.5, 17);
  MacroSiteConfig msc = macro_site_config(cg, s);
  msc.materialize();
  const ForbiddenSet fs = forbidden_set(msc, x, y, delta, kprime);
  CHECK(std::is_sorted(fs.closed.begin(), fs.closed.end()));

  std::set<std::uint32_t> closed_centers;
  for (std::uint32_t c = 0; c < cg.center_count(); ++c)
    if (msc.state(c) == SiteState::Closed) closed_centers.insert(c);
  // oracle: flood closed centers from the closed anchor sites, joining
  // centers at coarse distance <= delta
  std::set<std::uint32_t> reach;
  std::vector<std::uint32_t> queue;
  for (std::uint32_t c : fs.anchor) {
    if (closed_centers.count(c)) {
      reach.insert(c);
      queue.push_back(c);
    }
  }
  BfsScratch s2;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    BfsOptions opt;
    opt.max_depth = delta;
    bfs_run(cg.g, queue[head], s2, opt);
    for (VertexId w : s2.queue) {
      if (!closed_centers.count(w) || reach.count(w)) continue;
      reach.insert(w);
      queue.push_back(w);
    }
  }
  REQUIRE(fs.closed.size() == reach.size());
  for (std::uint32_t c : fs.closed) CHECK(reach.count(c) == 1);

  // flood bookkeeping: parents are earlier flood members within delta,
  // seeds are closed anchor sites
  for (std::uint32_t c : fs.closed) {
    const std::uint32_t seed_c = fs.flood_seed[c];
    CHECK(fs.in_anchor(seed_c));
    CHECK(closed_centers.count(seed_c) == 1);
    const std::uint32_t parent = fs.flood_parent[c];
    if (parent == kNoVertex) {
      CHECK(seed_c == c);
    } else {
      CHECK(fs.in_forbidden(parent));
      BfsOptions opt;
      opt.target = c;
      opt.max_depth = delta;
      CHECK(bfs_run(cg.g, parent, s2, opt) >= 0);
    }
  }

  CHECK_THROWS_AS(forbidden_set(msc, x, y, 0, kprime), config_error);
  CHECK_THROWS_AS(forbidden_set(msc, x, y, delta, 0), config_error);
}

TEST_CASE("closed precluster sizes behave at the extremes and obey the tail bound") {
  const FiniteRegion region = build_lattice(2, 90);
  const CoarseGraph cg = coarse_graph(region, 60);
  std::uint32_t c0 = 0;
  while (!cg.interior[c0]) ++c0;

  for (std::uint64_t seed = 0; seed < 50; ++seed)
    CHECK(precluster_sample(cg, c0, 2, 1.0, seed) == 0);
  // all-closed sites flood the whole (connected) coarse graph
  CHECK(precluster_sample(cg, c0, 2, 0.0, 1) == cg.center_count());
  CHECK(precluster_sample(cg, c0, 2, 0.7, 9) == precluster_sample(cg, c0, 2, 0.7, 9));

  // P(size >= 1) is exactly the closed-site density
  const double rho = 0.9;
  const int n = 20000;
  int nonzero = 0;
  for (int i = 0; i < n; ++i)
    if (precluster_sample(cg, c0, 2, rho, i) >= 1) ++nonzero;
  const double freq = static_cast<double>(nonzero) / n;
  const double sigma = std::sqrt(0.1 * 0.9 / n);
  CHECK(std::abs(freq - 0.1) < 4 * sigma);

  // geometric tail: P(size >= k) <= 2 (2 D^delta (1 - rho))^k once rho
  // clears the threshold density
  const int delta = 2;
  const double rho_hi = 0.995;
  CHECK(rho_hi > precluster_rho0(cg.max_degree, delta));
  const double base =
      2.0 * std::pow(static_cast<double>(cg.max_degree), delta) * (1.0 - rho_hi);
  const int m = 5000;
  std::vector<int> count_ge(7, 0);
  for (int i = 0; i < m; ++i) {
    const std::uint32_t size = precluster_sample(cg, c0, delta, rho_hi, 100000 + i);
    for (int k = 1; k <= 6; ++k)
      if (size >= static_cast<std::uint32_t>(k)) ++count_ge[k];
  }
  for (int k = 1; k <= 6; ++k) {
    const double cap = 2.0 * std::pow(base, k);
    const double fk = static_cast<double>(count_ge[k]) / m;
    CHECK(fk <= cap + 3 * wilson_se(count_ge[k], m));
  }
}
