#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "percchem/animal.hpp"
#include "percchem/dtilde.hpp"
#include "percchem/errors.hpp"
#include "percchem/graph.hpp"
#include "percchem/montecarlo.hpp"
#include "percchem/percolation.hpp"
#include "percchem/rng.hpp"
#include "percchem/russo.hpp"
#include "percchem/stats.hpp"
#include "percchem/table.hpp"

using namespace percchem;

namespace {

VertexId at(const FiniteRegion& region, std::vector<std::int32_t> c) {
  const auto v = region.vertex_at(c);
  REQUIRE(v.has_value());
  return *v;
}

// BFS distances from s over the full region graph.
std::vector<int> full_dist_from(const GraphView& g, VertexId s) {
  std::vector<int> dist(g.n, -1);
  std::vector<VertexId> queue{s};
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (const VertexId w : g.neighbors(u)) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

// BFS distances from s over open edges only.
std::vector<int> open_dist_from(const PercSample& sample, VertexId s) {
  const GraphView& g = sample.region->g;
  std::vector<int> dist(g.n, -1);
  std::vector<VertexId> queue{s};
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    auto ns = g.neighbors(u);
    auto es = g.incident(u);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (!sample.open.test(es[i])) continue;
      if (dist[ns[i]] >= 0) continue;
      dist[ns[i]] = dist[u] + 1;
      queue.push_back(ns[i]);
    }
  }
  return dist;
}

// Brute-force minimum of M * (d(o,a) + d(b,x)) + d_open(a,b) over all
// endpoint relocations, including the degenerate single-vertex path a = b.
double relocation_oracle(const PercSample& sample, VertexId o, VertexId x, double M) {
  const GraphView& g = sample.region->g;
  const std::vector<int> d_o = full_dist_from(g, o);
  const std::vector<int> d_x = full_dist_from(g, x);
  double best = std::numeric_limits<double>::infinity();
  for (VertexId a = 0; a < g.n; ++a) {
    const std::vector<int> dop = open_dist_from(sample, a);
    for (VertexId b = 0; b < g.n; ++b) {
      if (dop[b] < 0) continue;
      best = std::min(best, M * (d_o[a] + d_x[b]) + dop[b]);
    }
  }
  return best;
}

bool open_edge_between(const PercSample& sample, VertexId u, VertexId v) {
  const auto e = sample.region->g.find_edge(u, v);
  return e && sample.open.test(*e);
}

// Exhaustive self-avoiding-path maximum of the indicator sum, no pruning.
int sap_oracle(const FiniteRegion& region, const std::vector<std::uint8_t>& ind,
               int max_len) {
  const GraphView& g = region.g;
  std::vector<std::uint8_t> on_path(g.n, 0);
  int best = 0;
  auto dfs = [&](auto&& self, VertexId u, int depth, int value) -> void {
    best = std::max(best, value);
    if (depth == max_len) return;
    auto ns = g.neighbors(u);
    auto es = g.incident(u);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (on_path[ns[i]]) continue;
      on_path[ns[i]] = 1;
      self(self, ns[i], depth + 1, value + (ind[es[i]] ? 1 : 0));
      on_path[ns[i]] = 0;
    }
  };
  on_path[region.base] = 1;
  dfs(dfs, region.base, 0, 0);
  return best;
}

std::optional<std::string> meta_value(const EstimateTable& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata)
    if (k == key) return v;
  return std::nullopt;
}

}  // namespace

TEST_CASE("penalized distance matches the exhaustive relocation oracle") {
  struct Setup {
    int d, L;
    std::vector<std::int32_t> oc, xc;
  };
  const std::vector<Setup> setups = {
      {2, 3, {-3, 0}, {3, 0}},
      {1, 5, {-4}, {4}},
      {3, 2, {-2, 0, 0}, {2, 0, 0}},
  };
  for (const Setup& su : setups) {
    const FiniteRegion region = build_lattice(su.d, su.L);
    const VertexId o = at(region, su.oc);
    const VertexId x = at(region, su.xc);
    const int d0 = region.graph_distance(o, x);
    REQUIRE(d0 >= 3);
    const double M = std::pow(std::log(static_cast<double>(d0)), 5.0);
    const std::vector<int> d_o = full_dist_from(region.g, o);
    const std::vector<int> d_x = full_dist_from(region.g, x);

    for (const double p : {0.2, 0.5, 0.8}) {
      for (std::uint64_t seed = 0; seed < 17; ++seed) {
        const PercSample s = sample_config(region, p, substream(0xd71de, seed * 3 + 1));
        const DtildeResult dt = dtilde(s, o, x);
        CHECK(dt.M == doctest::Approx(M).epsilon(1e-12));
        CHECK(std::abs(dt.value - relocation_oracle(s, o, x, M)) <= 1e-9);

        // reported minimizer decomposes the value
        REQUIRE(!dt.pi.empty());
        CHECK(dt.pi.front() == dt.o_tilde);
        CHECK(dt.pi.back() == dt.x_tilde);
        const double edges = static_cast<double>(dt.pi.size() - 1);
        CHECK(std::abs(dt.value - (M * (d_o[dt.o_tilde] + d_x[dt.x_tilde]) + edges)) <=
              1e-9);
        const std::vector<int> dop = open_dist_from(s, dt.o_tilde);
        CHECK(dop[dt.x_tilde] == static_cast<int>(dt.pi.size()) - 1);
        for (std::size_t i = 1; i < dt.pi.size(); ++i)
          CHECK(open_edge_between(s, dt.pi[i - 1], dt.pi[i]));

        // the augmented path walks o -> o~ -> x~ -> x through the region
        REQUIRE(!dt.pi_bar.empty());
        CHECK(dt.pi_bar.front() == o);
        CHECK(dt.pi_bar.back() == x);
        for (std::size_t i = 1; i < dt.pi_bar.size(); ++i)
          CHECK(region.g.find_edge(dt.pi_bar[i - 1], dt.pi_bar[i]).has_value());
        const std::uint64_t bar_len = d_o[dt.o_tilde] + (dt.pi.size() - 1) +
                                      d_x[dt.x_tilde];
        CHECK(dt.pi_bar.size() - 1 == bar_len);
        CHECK(pi_bar_length(s, o, x) == bar_len);
      }
    }

    // no open edges: the whole trip is relocation through a geodesic vertex
    const PercSample closed = sample_config(region, 0.0, 7);
    const DtildeResult dt0 = dtilde(closed, o, x);
    CHECK(dt0.o_tilde == dt0.x_tilde);
    CHECK(dt0.pi.size() == 1);
    CHECK(d_o[dt0.o_tilde] + d_x[dt0.o_tilde] == d0);
    CHECK(dt0.value == doctest::Approx(M * d0).epsilon(1e-12));

    // full density: relocation is strictly wasteful, the geodesic wins
    const PercSample full = sample_config(region, 1.0, 7);
    const DtildeResult dt1 = dtilde(full, o, x);
    CHECK(dt1.o_tilde == o);
    CHECK(dt1.x_tilde == x);
    CHECK(dt1.value == doctest::Approx(static_cast<double>(d0)).epsilon(1e-12));
    CHECK(static_cast<int>(dt1.pi.size()) == d0 + 1);
  }
}

TEST_CASE("penalized distance rejects close endpoints and small exponents") {
  const FiniteRegion region = build_lattice(2, 4);
  const PercSample s = sample_config(region, 0.5, 1);
  const VertexId o = region.base;
  CHECK_THROWS_AS(dtilde(s, o, at(region, {1, 0})), precondition_error);
  CHECK_THROWS_AS(dtilde(s, o, at(region, {1, 1})), precondition_error);
  CHECK_THROWS_AS(dtilde(s, o, at(region, {3, 0}), 4.9), config_error);
  CHECK_THROWS_AS(dtilde(s, o, region.g.n), config_error);
}

TEST_CASE("augmented path length never exceeds the penalized value") {
  const FiniteRegion region = build_lattice(2, 8);
  const VertexId o = at(region, {-4, 0});
  const VertexId x = at(region, {4, 0});
  const int d0 = region.graph_distance(o, x);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PercSample s = sample_config(region, 0.6, substream(0xba7, seed));
    const DtildeResult dt = dtilde(s, o, x);
    CHECK(static_cast<double>(dt.pi_bar.size() - 1) <= dt.value + 1e-9);
    CHECK(dt.value >= static_cast<double>(d0) - 1e-9);
  }
}

TEST_CASE("derivative identity is exact on closed forms") {
  const std::vector<double> grid = {0.2, 0.5, 0.8};

  // one edge, f = closed indicator: E f = 1 - p, both sides are -1
  const GraphView single = GraphView::from_edges(2, {{0, 1}});
  const RussoReport one = russo_check(
      single, [](const EdgeSet& open) { return open.test(0) ? 0.0 : 1.0; }, grid);
  CHECK(one.decreasing_pairs_checked == 1000);
  CHECK(one.p_grid == grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(std::abs(one.lhs[j] + 1.0) <= 1e-12);
    CHECK(std::abs(one.rhs[j] + 1.0) <= 1e-12);
  }
  CHECK(one.max_abs_diff <= 1e-12);

  // two-edge path, f = endpoints disconnected: E f = 1 - p^2, slope -2p
  const GraphView path3 = GraphView::from_edges(3, {{0, 1}, {1, 2}});
  const RussoReport two = russo_check(
      path3,
      [](const EdgeSet& open) { return open.test(0) && open.test(1) ? 0.0 : 1.0; }, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(std::abs(two.lhs[j] + 2.0 * grid[j]) <= 1e-12);
    CHECK(std::abs(two.rhs[j] + 2.0 * grid[j]) <= 1e-12);
  }

  // constant observable: both sides vanish
  const GraphView square = GraphView::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const RussoReport flat =
      russo_check(square, [](const EdgeSet&) { return 0.7; }, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(std::abs(flat.lhs[j]) <= 1e-12);
    CHECK(std::abs(flat.rhs[j]) <= 1e-12);
  }

  // four-cycle disconnection: no closed form asserted, the identity must hold
  const RussoReport ring = russo_check(
      square,
      [](const EdgeSet& open) {
        const bool left = open.test(0) && open.test(1);
        const bool right = open.test(3) && open.test(2);
        return left || right ? 0.0 : 1.0;
      },
      {0.1, 0.3, 0.5, 0.7, 0.9});
  CHECK(ring.max_abs_diff <= 1e-12);
}

TEST_CASE("derivative identity rejects bad hosts and observables") {
  std::vector<std::pair<VertexId, VertexId>> long_path;
  for (VertexId v = 0; v < 21; ++v) long_path.emplace_back(v, v + 1);
  const GraphView big = GraphView::from_edges(22, long_path);
  CHECK_THROWS_AS(russo_check(big, [](const EdgeSet&) { return 0.0; }, {0.5}),
                  config_error);

  const GraphView square = GraphView::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK_THROWS_AS(
      russo_check(square,
                  [](const EdgeSet& open) { return static_cast<double>(open.count()); },
                  {0.5}),
      precondition_error);
  const Observable flat = [](const EdgeSet&) { return 1.0; };
  CHECK_THROWS_AS(russo_check(square, flat, {0.0}), config_error);
  CHECK_THROWS_AS(russo_check(square, flat, {1.0}), config_error);
  CHECK_THROWS_AS(russo_check(square, flat, {0.5, -0.25}), config_error);
}

TEST_CASE("bypass sums count unit-square detours") {
  const FiniteRegion plane = build_lattice(2, 6);
  const PercSample full = sample_config(plane, 1.0, 0);
  const std::vector<VertexId> axis = {at(plane, {0, 0}), at(plane, {1, 0}),
                                      at(plane, {2, 0}), at(plane, {3, 0})};
  CHECK(bypass_sum(full, axis) == 9);
  CHECK(bypass_sum(full, {axis[0]}) == 0);

  // on the line every edge is a bridge, so nothing reconnects
  const FiniteRegion line = build_lattice(1, 5);
  const PercSample lfull = sample_config(line, 1.0, 0);
  CHECK(bypass_sum(lfull, {at(line, {0}), at(line, {1}), at(line, {2})}) == 0);

  CHECK_THROWS_AS(bypass_sum(full, {}), precondition_error);
  CHECK_THROWS_AS(bypass_sum(full, {at(plane, {0, 0}), at(plane, {2, 0})}),
                  precondition_error);
  const PercSample closed = sample_config(plane, 0.0, 0);
  CHECK_THROWS_AS(bypass_sum(closed, axis), precondition_error);
}

TEST_CASE("bypass tail is exact at full density") {
  const FiniteRegion plane = build_lattice(2, 6);
  const auto edge = plane.g.find_edge(plane.base, at(plane, {1, 0}));
  REQUIRE(edge.has_value());
  const McRun run{42, 0, 32, 1};
  const EstimateTable t = bypass_tail(plane, *edge, 1.0, {1, 2, 3, 4, 5}, run);
  REQUIRE(t.rows.size() == 5);
  CHECK(t.param_names == std::vector<std::string>{"t"});
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    CHECK(t.rows[j].params[0] == static_cast<double>(j + 1));
    CHECK(t.rows[j].estimate == (j + 1 <= 3 ? 1.0 : 0.0));
    CHECK(t.rows[j].n == run.n);
    CHECK(t.rows[j].seed_lo == 0);
    CHECK(t.rows[j].seed_hi == run.n - 1);
    CHECK(t.rows[j].se ==
          doctest::Approx(wilson_se(j + 1 <= 3 ? run.n : 0, run.n)).epsilon(1e-15));
  }
  CHECK(meta_value(t, "p") == std::string("1"));

  CHECK_THROWS_AS(bypass_tail(plane, plane.g.edge_count(), 0.5, {1}, run), config_error);
  CHECK_THROWS_AS(bypass_tail(plane, *edge, 0.0, {1}, run), config_error);
  CHECK_THROWS_AS(bypass_tail(plane, *edge, 0.5, {0}, run), config_error);
  CHECK_THROWS_AS(bypass_tail(plane, *edge, 0.5, {1}, McRun{42, 0, 0, 1}), config_error);
}

TEST_CASE("connectivity tail matches closed forms at the extremes") {
  const FiniteRegion plane = build_lattice(2, 10);
  const VertexId x = at(plane, {-3, 0});
  const VertexId y = at(plane, {3, 0});
  const McRun run{7, 0, 64, 2};

  const TailEstimate all = tail_estimate(plane, x, y, 1.0, 1.0,
                                         {1, 2, 3, 4, 5, 6, 7, 8}, run);
  CHECK(all.connected == run.n);
  REQUIRE(all.joint.rows.size() == 8);
  for (std::size_t j = 0; j < 8; ++j) {
    const double want = j + 1 <= 6 ? 1.0 : 0.0;
    CHECK(all.joint.rows[j].estimate == want);
    CHECK(all.joint.rows[j].n == run.n);
    CHECK(all.conditional.rows[j].estimate == want);
    CHECK(all.conditional.rows[j].n == run.n);
  }
  CHECK(meta_value(all.joint, "dist") == std::string("6"));

  const TailEstimate twice = tail_estimate(plane, x, y, 1.0, 2.0, {1, 2, 3, 4}, run);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(twice.joint.rows[j].estimate == (j + 1 <= 3 ? 1.0 : 0.0));

  // near-empty configurations: nobody connects, the conditional table is void
  const TailEstimate none =
      tail_estimate(plane, x, y, 0.02, 1.0, {1, 2}, McRun{1234, 0, 40, 1});
  CHECK(none.connected == 0);
  for (const auto& row : none.conditional.rows) {
    CHECK(row.estimate == 0.0);
    CHECK(row.se == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(row.n == 0);
  }
  for (const auto& row : none.joint.rows) CHECK(row.estimate == 0.0);

  CHECK_THROWS_AS(tail_estimate(plane, x, x, 0.5, 1.0, {1}, run), config_error);
  CHECK_THROWS_AS(tail_estimate(plane, x, y, 0.5, 0.0, {1}, run), config_error);
  CHECK_THROWS_AS(tail_estimate(plane, x, y, 0.5, 1.0, {}, run), config_error);
  CHECK_THROWS_AS(tail_estimate(plane, x, plane.g.n, 0.5, 1.0, {1}, run), config_error);
  CHECK_THROWS_AS(
      tail_estimate(plane, at(plane, {-10, 0}), at(plane, {10, 0}), 0.5, 1.0, {1}, run),
      geometry_error);
}

TEST_CASE("directional speed is exactly one at full density") {
  const FiniteRegion plane = build_lattice(2, 12);
  const McRun run{3, 5, 16, 1};
  const EstimateTable t = time_constant(plane, 1.0, {2, 4, 6}, run);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.param_names == std::vector<std::string>{"p", "dist"});
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(t.rows[j].params[0] == 1.0);
    CHECK(t.rows[j].params[1] == static_cast<double>(2 * (j + 1)));
    CHECK(t.rows[j].estimate == 1.0);
    CHECK(t.rows[j].se == 0.0);
    CHECK(t.rows[j].n == run.n);
    CHECK(t.rows[j].seed_lo == 5);
    CHECK(t.rows[j].seed_hi == 5 + run.n - 1);
  }
  CHECK(meta_value(t, "skipped") == std::string("0"));

  const FiniteRegion heis = build_heisenberg(8);
  const EstimateTable h = time_constant(heis, 1.0, {2, 3}, McRun{3, 0, 6, 1});
  for (const auto& row : h.rows) CHECK(row.estimate == 1.0);

  CHECK_THROWS_AS(time_constant(plane, 1.0, {7}, run), geometry_error);
  CHECK_THROWS_AS(time_constant(plane, 0.0, {2}, run), config_error);
  CHECK_THROWS_AS(time_constant(plane, 1.0, {}, run), config_error);
}

TEST_CASE("coupled sweep pins the full-density row and monotone means") {
  const FiniteRegion plane = build_lattice(2, 10);
  const VertexId o = at(plane, {-3, 0});
  const VertexId x = at(plane, {3, 0});
  const std::vector<double> grid = {0.55, 0.70, 0.85, 1.0};
  const McRun run{11, 0, 60, 2};
  const LipschitzSweep sweep = lipschitz_sweep(plane, o, x, grid, run);

  REQUIRE(sweep.per_p.rows.size() == grid.size());
  const std::uint64_t kept = run.n - sweep.skipped;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(sweep.per_p.rows[j].params[0] == grid[j]);
    CHECK(sweep.per_p.rows[j].n == kept);
    CHECK(sweep.per_p.rows[j].estimate >= 1.0 - 1e-12);
    if (j) CHECK(sweep.per_p.rows[j].estimate <= sweep.per_p.rows[j - 1].estimate + 1e-12);
  }
  CHECK(sweep.per_p.rows.back().estimate == 1.0);
  CHECK(sweep.per_p.rows.back().se == 0.0);

  REQUIRE(sweep.diffs.rows.size() == grid.size() - 1);
  double max_ratio = 0;
  for (std::size_t j = 0; j < sweep.diffs.rows.size(); ++j) {
    CHECK(sweep.diffs.rows[j].params[0] == grid[j]);
    CHECK(sweep.diffs.rows[j].params[1] == grid[j + 1]);
    CHECK(sweep.diffs.rows[j].estimate >= -1e-12);
    max_ratio = std::max(max_ratio, std::abs(sweep.diffs.rows[j].estimate));
  }
  CHECK(sweep.max_ratio == doctest::Approx(max_ratio).epsilon(1e-15));

  CHECK_THROWS_AS(lipschitz_sweep(plane, o, x, {0.5}, run), config_error);
  CHECK_THROWS_AS(lipschitz_sweep(plane, o, x, {0.5, 0.5}, run), config_error);
  CHECK_THROWS_AS(lipschitz_sweep(plane, o, x, {0.0, 0.5}, run), config_error);
  CHECK_THROWS_AS(lipschitz_sweep(plane, o, o, grid, run), config_error);
  CHECK_THROWS_AS(
      lipschitz_sweep(plane, at(plane, {-10, 0}), at(plane, {10, 0}), grid, run),
      geometry_error);
}

TEST_CASE("relocation error vanishes at full density") {
  const FiniteRegion plane = build_lattice(2, 10);
  const std::vector<std::pair<VertexId, VertexId>> pairs = {
      {at(plane, {-3, 0}), at(plane, {3, 0})},
      {at(plane, {0, -3}), at(plane, {0, 3})},
  };
  const McRun run{5, 0, 12, 1};
  const EstimateTable t = goodapprox_check(plane, 1.0, pairs, 5.0, run);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.param_names == std::vector<std::string>{"dist", "skipped"});
  for (const auto& row : t.rows) {
    CHECK(row.params[0] == 6.0);
    CHECK(row.params[1] == 0.0);
    CHECK(row.estimate == 0.0);
    CHECK(row.se == 0.0);
    CHECK(row.n == run.n);
  }

  CHECK_THROWS_AS(goodapprox_check(plane, 1.0, {}, 5.0, run), config_error);
  CHECK_THROWS_AS(goodapprox_check(
                      plane, 1.0,
                      {{at(plane, {-6, 0}), at(plane, {3, 0})}}, 5.0, run),
                  geometry_error);
  CHECK_THROWS_AS(goodapprox_check(plane, 1.0, {{plane.base, at(plane, {1, 0})}}, 5.0,
                                   run),
                  precondition_error);
}

TEST_CASE("giant ring hits have zero radius at full density") {
  const FiniteRegion plane = build_lattice(2, 8);
  const McRun run{9, 0, 24, 1};
  const EstimateTable t = ring_distance_tail(plane, 1.0, plane.base, {1, 2, 3}, run);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.param_names == std::vector<std::string>{"r"});
  for (const auto& row : t.rows) {
    CHECK(row.estimate == 0.0);
    CHECK(row.n == run.n);
    CHECK(row.se == doctest::Approx(wilson_se(0, run.n)).epsilon(1e-15));
  }
  CHECK(meta_value(t, "skipped") == std::string("0"));

  CHECK_THROWS_AS(ring_distance_tail(plane, 1.0, at(plane, {-5, 0}), {1}, run),
                  geometry_error);
  CHECK_THROWS_AS(ring_distance_tail(plane, 0.0, plane.base, {1}, run), config_error);
}

TEST_CASE("augmented tails are exact at full density") {
  const FiniteRegion plane = build_lattice(2, 8);
  const VertexId o = at(plane, {-3, 0});
  const VertexId x = at(plane, {3, 0});
  const McRun run{13, 0, 16, 1};

  const EstimateTable unit = pibar_tail(plane, o, x, 1.0, 5.0, 1.0,
                                        {1, 2, 3, 4, 5, 6, 7, 8}, run);
  REQUIRE(unit.rows.size() == 8);
  for (std::size_t j = 0; j < 8; ++j)
    CHECK(unit.rows[j].estimate == (j + 1 <= 6 ? 1.0 : 0.0));

  const EstimateTable twice = pibar_tail(plane, o, x, 1.0, 5.0, 2.0, {1, 2, 3, 4}, run);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(twice.rows[j].estimate == (j + 1 <= 3 ? 1.0 : 0.0));

  CHECK_THROWS_AS(pibar_tail(plane, o, x, 1.0, 5.0, 0.0, {1}, run), config_error);
  CHECK_THROWS_AS(pibar_tail(plane, plane.base, at(plane, {1, 0}), 1.0, 5.0, 1.0, {1},
                             run),
                  precondition_error);
}

TEST_CASE("estimator output is independent of the worker count") {
  const FiniteRegion plane = build_lattice(2, 6);
  const VertexId x = at(plane, {-2, 0});
  const VertexId y = at(plane, {2, 0});
  std::vector<std::string> joints, conds;
  for (const unsigned workers : {1u, 3u, 8u}) {
    const TailEstimate te =
        tail_estimate(plane, x, y, 0.7, 1.0, {2, 4, 6}, McRun{21, 0, 200, workers});
    joints.push_back(te.joint.csv());
    conds.push_back(te.conditional.csv());
  }
  CHECK(joints[0] == joints[1]);
  CHECK(joints[0] == joints[2]);
  CHECK(conds[0] == conds[1]);
  CHECK(conds[0] == conds[2]);

  std::vector<std::string> sweeps;
  for (const unsigned workers : {1u, 4u}) {
    const LipschitzSweep sw = lipschitz_sweep(plane, x, y, {0.6, 0.8, 1.0},
                                              McRun{23, 10, 120, workers});
    sweeps.push_back(sw.per_p.csv() + sw.diffs.csv());
  }
  CHECK(sweeps[0] == sweeps[1]);
}

TEST_CASE("exact path search matches brute force") {
  const FiniteRegion plane = build_lattice(2, 3);
  const std::uint32_t m = plane.g.edge_count();

  std::vector<std::uint8_t> ones(m, 1), zeros(m, 0);
  CHECK(greedy_animal(plane, ones, 6) == 6);
  CHECK(greedy_animal(plane, zeros, 6) == 0);
  CHECK(greedy_animal(plane, ones, 0) == 0);

  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    std::vector<std::uint8_t> ind(m);
    const std::uint64_t key = substream(0xa21fa1, trial);
    for (std::uint32_t e = 0; e < m; ++e) ind[e] = uniform01(key, e) < 0.5 ? 1 : 0;
    for (int max_len = 0; max_len <= 6; ++max_len)
      CHECK(greedy_animal(plane, ind, max_len) == sap_oracle(plane, ind, max_len));
  }

  CHECK_THROWS_AS(greedy_animal(plane, ones, 13), config_error);
  CHECK_THROWS_AS(greedy_animal(plane, ones, -1), config_error);
  CHECK_THROWS_AS(greedy_animal(plane, std::vector<std::uint8_t>(m + 1, 0), 3),
                  precondition_error);
}

TEST_CASE("edge coloring separates same-colored edges") {
  const FiniteRegion plane = build_lattice(2, 6);
  const std::uint32_t m = plane.g.edge_count();
  std::vector<std::vector<int>> dist(plane.g.n);
  for (VertexId v = 0; v < plane.g.n; ++v) dist[v] = full_dist_from(plane.g, v);

  for (const int N : {1, 2}) {
    const ColoringResult col = coloring_bound(plane, N);
    CHECK(!col.degenerate);
    CHECK(col.N == N);
    CHECK(col.colors >= 1);
    CHECK(col.colors <= col.bound);
    REQUIRE(col.color_of.size() == m);
    for (EdgeId e = 0; e < m; ++e) {
      for (EdgeId f = e + 1; f < m; ++f) {
        if (col.color_of[e] != col.color_of[f]) continue;
        const auto [a1, b1] = plane.g.ends[e];
        const auto [a2, b2] = plane.g.ends[f];
        const int sep = std::min(std::min(dist[a1][a2], dist[a1][b2]),
                                 std::min(dist[b1][a2], dist[b1][b2]));
        CHECK(sep > 2 * N);
      }
    }
  }

  // witness ball radius 2N+2 = 4 holds 41 vertices, base degree 4
  CHECK(coloring_bound(plane, 1).bound == 41 * 4 + 1);

  // once 2N spans the region every pair of edges conflicts
  const FiniteRegion small = build_lattice(2, 4);
  const ColoringResult full = coloring_bound(small, 4);
  CHECK(full.degenerate);
  CHECK(full.colors == static_cast<int>(small.g.edge_count()));
  for (EdgeId e = 0; e < small.g.edge_count(); ++e) CHECK(full.color_of[e] == e);

  CHECK_THROWS_AS(coloring_bound(plane, 0), config_error);
}

TEST_CASE("estimate tables serialize deterministically") {
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(1e16) == "1e+16");
  for (const double x : {1.0 / 3.0, 6.02e23, 2.2250738585072014e-308, -0.7356,
                         123456.789012345}) {
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }

  EstimateTable t;
  t.param_names = {"a", "b"};
  t.metadata.emplace_back("note", "never serialized");
  EstimateTable::Row r1;
  r1.params = {1.0, 2.0};
  r1.estimate = 0.5;
  r1.se = 0.25;
  r1.n = 10;
  r1.seed_lo = 0;
  r1.seed_hi = 9;
  EstimateTable::Row r2;
  r2.params = {3.0, 0.125};
  r2.estimate = 1.0;
  r2.se = 0.0;
  r2.n = 4;
  r2.seed_lo = 100;
  r2.seed_hi = 103;
  t.rows = {r1, r2};
  CHECK(t.csv() ==
        "a,b,estimate,stderr,n,seed_lo,seed_hi\n"
        "1,2,0.5,0.25,10,0,9\n"
        "3,0.125,1,0,4,100,103\n");

  EstimateTable bad = t;
  bad.rows[0].params = {1.0};
  CHECK_THROWS_AS(bad.csv(), invariant_violation);
}
