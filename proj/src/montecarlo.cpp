#include "percchem/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "percchem/dtilde.hpp"
#include "percchem/errors.hpp"
#include "percchem/parallel.hpp"
#include "percchem/rng.hpp"
#include "percchem/stats.hpp"

namespace percchem {

namespace {

constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();

void check_run(const McRun& run) {
  if (run.n == 0) throw config_error("sample count must be positive");
}

void check_p(double p) {
  if (!(p > 0.0) || p > 1.0) throw config_error("edge density must lie in (0, 1]");
}

void check_grid(const std::vector<int>& grid, const char* what) {
  if (grid.empty()) throw config_error(std::string(what) + " grid is empty");
  for (int t : grid)
    if (t < 1) throw config_error(std::string(what) + " grid entries must be positive");
}

std::uint64_t stream_of(const McRun& run, std::uint64_t i) {
  return substream(run.seed, run.index_lo + i);
}

void stamp(EstimateTable& t, const FiniteRegion& region) {
  t.metadata.emplace_back("family", family_name(region.family));
  t.metadata.emplace_back("dim", std::to_string(region.dim));
  t.metadata.emplace_back("L", std::to_string(region.radius));
}

void seed_range(const McRun& run, EstimateTable::Row& row) {
  row.seed_lo = run.index_lo;
  row.seed_hi = run.index_lo + run.n - 1;
}

// Per-worker sampling state, indexed by the worker id parallel_items hands out.
struct WorkerPool {
  std::vector<PercSample> samples;
  std::vector<BfsScratch> scratch;

  WorkerPool(const FiniteRegion& region, unsigned workers) {
    samples.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) samples.push_back(sample_config(region, 0.0, 0));
    scratch.resize(workers);
  }
};

// minimum giant-proxy size for a sample to count as having one
std::uint32_t giant_floor(const FiniteRegion& region) {
  return std::max<std::uint32_t>(2, region.g.n / 100);
}

std::vector<double> drop_skips(const std::vector<double>& xs) {
  std::vector<double> kept;
  kept.reserve(xs.size());
  for (double x : xs)
    if (!std::isnan(x)) kept.push_back(x);
  return kept;
}

}  // namespace

TailEstimate tail_estimate(const FiniteRegion& region, VertexId x, VertexId y, double p,
                           double K, const std::vector<int>& t_grid, const McRun& run) {
  check_run(run);
  check_p(p);
  if (x >= region.g.n || y >= region.g.n) throw config_error("tail endpoint out of range");
  if (x == y) throw config_error("tail endpoints must be distinct");
  if (!(K > 0)) throw config_error("tail multiplier must be positive");
  check_grid(t_grid, "t");
  if (!region.interior_margin(x, y))
    throw geometry_error("tail endpoints lack the margin for exact graph distances");
  const int d0 = region.graph_distance(x, y);

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  std::vector<std::int32_t> dist(run.n);
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    resample(pool.samples[w], p, stream_of(run, i));
    dist[i] = static_cast<std::int32_t>(chem_dist(pool.samples[w], x, y, pool.scratch[w]));
  });

  TailEstimate te;
  for (std::uint64_t i = 0; i < run.n; ++i) {
    if (dist[i] < 0) continue;
    if (dist[i] < d0) throw invariant_violation("open distance fell below the graph distance");
    ++te.connected;
  }
  te.joint.param_names = {"t"};
  te.conditional.param_names = {"t"};
  for (EstimateTable* t : {&te.joint, &te.conditional}) {
    stamp(*t, region);
    t->metadata.emplace_back("p", format_number(p));
    t->metadata.emplace_back("K", format_number(K));
    t->metadata.emplace_back("dist", std::to_string(d0));
  }
  for (const int t : t_grid) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < run.n; ++i)
      if (dist[i] >= 0 && static_cast<double>(dist[i]) >= K * t) ++k;
    EstimateTable::Row joint;
    joint.params = {static_cast<double>(t)};
    joint.estimate = static_cast<double>(k) / static_cast<double>(run.n);
    joint.se = wilson_se(k, run.n);
    joint.n = run.n;
    seed_range(run, joint);
    te.joint.rows.push_back(joint);

    EstimateTable::Row cond;
    cond.params = {static_cast<double>(t)};
    cond.estimate =
        te.connected ? static_cast<double>(k) / static_cast<double>(te.connected) : 0.0;
    cond.se = wilson_se(k, te.connected);
    cond.n = te.connected;
    seed_range(run, cond);
    te.conditional.rows.push_back(cond);
  }
  return te;
}

std::int64_t bypass_sum(const PercSample& sample, const std::vector<VertexId>& path) {
  if (!sample.region) throw precondition_error("sample has no region");
  const GraphView& g = sample.region->g;
  if (path.empty()) throw precondition_error("bypass path is empty");
  std::int64_t total = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto e = g.find_edge(path[i - 1], path[i]);
    if (!e || !sample.open.test(*e))
      throw precondition_error("bypass path is not open in the sample");
    if (const auto d = chemical_distance_deleted(sample, *e)) total += *d;
  }
  return total;
}

EstimateTable bypass_tail(const FiniteRegion& region, EdgeId edge, double p,
                          const std::vector<int>& t_grid, const McRun& run) {
  check_run(run);
  check_p(p);
  if (edge >= region.g.edge_count()) throw config_error("bypass edge out of range");
  check_grid(t_grid, "t");
  const auto [u, v] = region.g.ends[edge];
  // reconnect length in the full graph, the per-sample floor (-1: bridge edge)
  const PercSample full = sample_config(region, 1.0, 0);
  const int dmin = chemical_distance_deleted(full, edge).value_or(-1);

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  std::vector<std::int32_t> dist(run.n);
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    resample(pool.samples[w], p, stream_of(run, i));
    dist[i] =
        static_cast<std::int32_t>(chem_dist(pool.samples[w], u, v, pool.scratch[w], edge));
  });

  EstimateTable table;
  table.param_names = {"t"};
  stamp(table, region);
  table.metadata.emplace_back("p", format_number(p));
  table.metadata.emplace_back("edge", std::to_string(edge));
  for (std::uint64_t i = 0; i < run.n; ++i) {
    if (dist[i] < 0) continue;
    if (dmin < 0 || dist[i] < dmin)
      throw invariant_violation("deleted-edge reconnect beat the full-graph floor");
  }
  for (const int t : t_grid) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < run.n; ++i)
      if (dist[i] >= t) ++k;
    EstimateTable::Row row;
    row.params = {static_cast<double>(t)};
    row.estimate = static_cast<double>(k) / static_cast<double>(run.n);
    row.se = wilson_se(k, run.n);
    row.n = run.n;
    seed_range(run, row);
    table.rows.push_back(row);
  }
  return table;
}

EstimateTable time_constant(const FiniteRegion& region, double p,
                            const std::vector<int>& n_grid, const McRun& run) {
  check_run(run);
  check_p(p);
  check_grid(n_grid, "n");
  const VertexId o = region.base;
  std::vector<VertexId> targets;
  for (const int n : n_grid) {
    if (2 * n > region.radius)
      throw geometry_error("direction endpoint outside the L/2 core; need L >= " +
                           std::to_string(2 * n));
    std::vector<std::int32_t> c(static_cast<std::size_t>(region.dim), 0);
    c[0] = n;
    const auto vtx = region.vertex_at(c);
    if (!vtx) throw geometry_error("direction endpoint missing from the region");
    if (region.graph_distance(o, *vtx) != n)
      throw geometry_error("direction endpoint is not at word distance n");
    targets.push_back(*vtx);
  }

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  const std::uint32_t floor_size = giant_floor(region);
  std::vector<double> value(run.n * n_grid.size());
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    PercSample& s = pool.samples[w];
    BfsScratch& scr = pool.scratch[w];
    const std::uint64_t stream = stream_of(run, i);
    resample(s, p, stream);
    const ClusterLabeling cl = clusters(s);
    double* slot = value.data() + i * n_grid.size();
    if (cl.size[cl.giant] < floor_size) {
      for (std::size_t j = 0; j < n_grid.size(); ++j) slot[j] = kSkip;
      return;
    }
    const RingHit ro = ring_point_hit(s, cl, o, stream, scr);
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
      const RingHit rx = ring_point_hit(s, cl, targets[j], stream, scr);
      const int D = chem_dist(s, ro.v, rx.v, scr);
      if (D < 0) throw invariant_violation("giant ring points failed to connect");
      if (D < n_grid[j] - ro.dist - rx.dist)
        throw invariant_violation("open distance fell below the graph distance");
      slot[j] = static_cast<double>(D) / static_cast<double>(n_grid[j]);
    }
  });

  EstimateTable table;
  table.param_names = {"p", "dist"};
  stamp(table, region);
  std::uint64_t skipped = 0;
  for (std::uint64_t i = 0; i < run.n; ++i)
    if (std::isnan(value[i * n_grid.size()])) ++skipped;
  table.metadata.emplace_back("skipped", std::to_string(skipped));
  std::vector<double> column(run.n);
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    for (std::uint64_t i = 0; i < run.n; ++i) column[i] = value[i * n_grid.size() + j];
    const MeanSe ms = mean_se(drop_skips(column));
    EstimateTable::Row row;
    row.params = {p, static_cast<double>(n_grid[j])};
    row.estimate = ms.mean;
    row.se = ms.se;
    row.n = ms.n;
    seed_range(run, row);
    table.rows.push_back(row);
  }
  return table;
}

LipschitzSweep lipschitz_sweep(const FiniteRegion& region, VertexId o, VertexId x,
                               const std::vector<double>& p_grid, const McRun& run) {
  check_run(run);
  if (o >= region.g.n || x >= region.g.n) throw config_error("sweep endpoint out of range");
  if (o == x) throw config_error("sweep endpoints must be distinct");
  if (p_grid.size() < 2) throw config_error("p grid needs at least two values");
  for (std::size_t j = 0; j < p_grid.size(); ++j) {
    check_p(p_grid[j]);
    if (j && !(p_grid[j - 1] < p_grid[j]))
      throw config_error("p grid must be strictly increasing");
  }
  if (!region.interior_margin(o, x))
    throw geometry_error("sweep endpoints lack the margin for exact graph distances");
  const int d0 = region.graph_distance(o, x);
  const std::size_t P = p_grid.size();

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  std::vector<std::int32_t> dist(run.n * P);
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    const std::uint64_t stream = stream_of(run, i);
    for (std::size_t j = 0; j < P; ++j) {
      // same stream across the grid: open sets are nested in p
      resample(pool.samples[w], p_grid[j], stream);
      dist[i * P + j] =
          static_cast<std::int32_t>(chem_dist(pool.samples[w], o, x, pool.scratch[w]));
    }
  });

  LipschitzSweep sweep;
  std::vector<std::uint8_t> retained(run.n, 0);
  std::uint64_t kept = 0;
  for (std::uint64_t i = 0; i < run.n; ++i) {
    const std::int32_t* row = dist.data() + i * P;
    for (std::size_t j = 0; j < P; ++j) {
      if (row[j] < 0) continue;
      if (row[j] < d0)
        throw invariant_violation("open distance fell below the graph distance");
      if (j + 1 < P && (row[j + 1] < 0 || row[j + 1] > row[j]))
        throw invariant_violation("coupled open distances are not monotone in p");
    }
    if (row[0] >= 0) {
      retained[i] = 1;
      ++kept;
    }
  }
  sweep.skipped = run.n - kept;

  sweep.per_p.param_names = {"p"};
  sweep.diffs.param_names = {"p", "q"};
  for (EstimateTable* t : {&sweep.per_p, &sweep.diffs}) {
    stamp(*t, region);
    t->metadata.emplace_back("dist", std::to_string(d0));
    t->metadata.emplace_back("skipped", std::to_string(sweep.skipped));
  }
  std::vector<double> column;
  column.reserve(kept);
  for (std::size_t j = 0; j < P; ++j) {
    column.clear();
    for (std::uint64_t i = 0; i < run.n; ++i)
      if (retained[i]) column.push_back(static_cast<double>(dist[i * P + j]) / d0);
    const MeanSe ms = mean_se(column);
    EstimateTable::Row row;
    row.params = {p_grid[j]};
    row.estimate = ms.mean;
    row.se = ms.se;
    row.n = ms.n;
    seed_range(run, row);
    sweep.per_p.rows.push_back(row);
  }
  for (std::size_t j = 0; j + 1 < P; ++j) {
    column.clear();
    const double dp = p_grid[j + 1] - p_grid[j];
    for (std::uint64_t i = 0; i < run.n; ++i) {
      if (!retained[i]) continue;
      const double diff = static_cast<double>(dist[i * P + j] - dist[i * P + j + 1]);
      column.push_back(diff / d0 / dp);
    }
    const MeanSe ms = mean_se(column);
    EstimateTable::Row row;
    row.params = {p_grid[j], p_grid[j + 1]};
    row.estimate = ms.mean;
    row.se = ms.se;
    row.n = ms.n;
    seed_range(run, row);
    sweep.diffs.rows.push_back(row);
    sweep.max_ratio = std::max(sweep.max_ratio, std::abs(ms.mean));
  }
  return sweep;
}

EstimateTable goodapprox_check(const FiniteRegion& region, double p,
                               const std::vector<std::pair<VertexId, VertexId>>& pairs,
                               double c_exp, const McRun& run) {
  check_run(run);
  check_p(p);
  if (pairs.empty()) throw config_error("no endpoint pairs given");
  std::vector<int> d0(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto [a, b] = pairs[j];
    if (a >= region.g.n || b >= region.g.n) throw config_error("pair endpoint out of range");
    if (2 * region.base_dist[a] > region.radius || 2 * region.base_dist[b] > region.radius)
      throw geometry_error("pair endpoint outside the L/2 core");
    if (!region.interior_margin(a, b))
      throw geometry_error("pair endpoints lack the margin for exact graph distances");
    d0[j] = region.graph_distance(a, b);
    if (d0[j] < 3) throw precondition_error("pair endpoints closer than distance 3");
  }

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  const std::uint32_t floor_size = giant_floor(region);
  std::vector<double> value(run.n * pairs.size());
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    PercSample& s = pool.samples[w];
    BfsScratch& scr = pool.scratch[w];
    const std::uint64_t stream = stream_of(run, i);
    resample(s, p, stream);
    const ClusterLabeling cl = clusters(s);
    double* slot = value.data() + i * pairs.size();
    if (cl.size[cl.giant] < floor_size) {
      for (std::size_t j = 0; j < pairs.size(); ++j) slot[j] = kSkip;
      return;
    }
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const auto [a, b] = pairs[j];
      const RingHit ra = ring_point_hit(s, cl, a, stream, scr);
      const RingHit rb = ring_point_hit(s, cl, b, stream, scr);
      const int D = chem_dist(s, ra.v, rb.v, scr);
      if (D < 0) throw invariant_violation("giant ring points failed to connect");
      if (D < d0[j] - ra.dist - rb.dist)
        throw invariant_violation("open distance fell below the graph distance");
      const DtildeResult dt = dtilde(s, a, b, c_exp);
      slot[j] = std::abs(static_cast<double>(D) - dt.value) / d0[j];
    }
  });

  EstimateTable table;
  table.param_names = {"dist", "skipped"};
  stamp(table, region);
  table.metadata.emplace_back("p", format_number(p));
  table.metadata.emplace_back("C", format_number(c_exp));
  std::uint64_t skipped = 0;
  for (std::uint64_t i = 0; i < run.n; ++i)
    if (std::isnan(value[i * pairs.size()])) ++skipped;
  std::vector<double> column(run.n);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    for (std::uint64_t i = 0; i < run.n; ++i) column[i] = value[i * pairs.size() + j];
    const MeanSe ms = mean_se(drop_skips(column));
    EstimateTable::Row row;
    row.params = {static_cast<double>(d0[j]), static_cast<double>(skipped)};
    row.estimate = ms.mean;
    row.se = ms.se;
    row.n = ms.n;
    seed_range(run, row);
    table.rows.push_back(row);
  }
  return table;
}

EstimateTable ring_distance_tail(const FiniteRegion& region, double p, VertexId o,
                                 const std::vector<int>& n_grid, const McRun& run) {
  check_run(run);
  check_p(p);
  if (o >= region.g.n) throw config_error("origin out of range");
  if (2 * region.base_dist[o] > region.radius)
    throw geometry_error("origin outside the L/2 core");
  check_grid(n_grid, "n");

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  const std::uint32_t floor_size = giant_floor(region);
  std::vector<std::int32_t> dist(run.n);
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    PercSample& s = pool.samples[w];
    const std::uint64_t stream = stream_of(run, i);
    resample(s, p, stream);
    const ClusterLabeling cl = clusters(s);
    if (cl.size[cl.giant] < floor_size) {
      dist[i] = -1;
      return;
    }
    dist[i] = ring_point_hit(s, cl, o, stream, pool.scratch[w]).dist;
  });

  EstimateTable table;
  table.param_names = {"r"};
  stamp(table, region);
  table.metadata.emplace_back("p", format_number(p));
  std::uint64_t kept = 0;
  for (std::uint64_t i = 0; i < run.n; ++i)
    if (dist[i] >= 0) ++kept;
  table.metadata.emplace_back("skipped", std::to_string(run.n - kept));
  for (const int n : n_grid) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < run.n; ++i)
      if (dist[i] >= n) ++k;
    EstimateTable::Row row;
    row.params = {static_cast<double>(n)};
    row.estimate = kept ? static_cast<double>(k) / static_cast<double>(kept) : 0.0;
    row.se = wilson_se(k, kept);
    row.n = kept;
    seed_range(run, row);
    table.rows.push_back(row);
  }
  return table;
}

EstimateTable pibar_tail(const FiniteRegion& region, VertexId o, VertexId x, double p,
                         double c_exp, double factor, const std::vector<int>& t_grid,
                         const McRun& run) {
  check_run(run);
  check_p(p);
  if (o >= region.g.n || x >= region.g.n) throw config_error("endpoint out of range");
  if (!(factor > 0)) throw config_error("tail factor must be positive");
  check_grid(t_grid, "t");
  if (region.graph_distance(o, x) < 3)
    throw precondition_error("endpoints closer than distance 3");

  const unsigned workers = run.workers ? run.workers : 1;
  WorkerPool pool(region, workers);
  std::vector<std::int32_t> len(run.n);
  parallel_items(run.n, workers, [&](unsigned w, std::uint64_t i) {
    PercSample& s = pool.samples[w];
    resample(s, p, stream_of(run, i));
    const DtildeResult dt = dtilde(s, o, x, c_exp);
    const std::uint64_t bar = dt.pi_bar.size() - 1;
    if (static_cast<double>(bar) > dt.value + 1e-9)
      throw invariant_violation("augmented path longer than the penalized distance");
    len[i] = static_cast<std::int32_t>(bar);
  });

  EstimateTable table;
  table.param_names = {"t"};
  stamp(table, region);
  table.metadata.emplace_back("p", format_number(p));
  table.metadata.emplace_back("C", format_number(c_exp));
  table.metadata.emplace_back("factor", format_number(factor));
  for (const int t : t_grid) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < run.n; ++i)
      if (static_cast<double>(len[i]) >= factor * t) ++k;
    EstimateTable::Row row;
    row.params = {static_cast<double>(t)};
    row.estimate = static_cast<double>(k) / static_cast<double>(run.n);
    row.se = wilson_se(k, run.n);
    row.n = run.n;
    seed_range(run, row);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace percchem
