#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "percchem/graph.hpp"
#include "percchem/percolation.hpp"
#include "percchem/table.hpp"

namespace percchem {

// Seed plan for one estimator run: sample i draws its configuration from
// substream(seed, index_lo + i), i in [0, n).  Output depends on
// (seed, index_lo, n) only, never on the worker count.
struct McRun {
  std::uint64_t seed = 0;
  std::uint64_t index_lo = 0;
  std::uint64_t n = 0;
  unsigned workers = 1;
};

struct TailEstimate {
  EstimateTable joint;        // per t: frequency of {x<->y and dist >= K t}
  EstimateTable conditional;  // same event, frequency among connected samples
  std::uint64_t connected = 0;
};

// Exceedance frequencies of the open-path distance between two fixed
// vertices, jointly with connectivity.
TailEstimate tail_estimate(const FiniteRegion& region, VertexId x, VertexId y, double p,
                           double K, const std::vector<int>& t_grid, const McRun& run);

// Sum over path edges of the reconnect length with that edge forced closed
// (0 for edges whose endpoints disconnect).  The path must be open.
std::int64_t bypass_sum(const PercSample& sample, const std::vector<VertexId>& path);

// Per t: frequency of {endpoints of `edge` reconnect without it at length >= t}.
EstimateTable bypass_tail(const FiniteRegion& region, EdgeId edge, double p,
                          const std::vector<int>& t_grid, const McRun& run);

// Rows (p, n, mean ring-to-ring open distance / n) for the endpoint n steps
// along the first generator direction; the large-n value estimates the
// directional speed of the open metric.
EstimateTable time_constant(const FiniteRegion& region, double p,
                            const std::vector<int>& n_grid, const McRun& run);

struct LipschitzSweep {
  EstimateTable per_p;  // params {p}: mean dist(o,x)/d over retained samples
  EstimateTable diffs;  // params {p,q}: mean coupled difference per unit p
  double max_ratio = 0;
  std::uint64_t skipped = 0;  // samples not connected at the smallest p
};

// Coupled sweep of the normalized open distance across a p grid.  Samples
// are retained iff o and x are connected at p_grid[0]; retained samples are
// connected, and monotone, across the whole grid.
LipschitzSweep lipschitz_sweep(const FiniteRegion& region, VertexId o, VertexId x,
                               const std::vector<double>& p_grid, const McRun& run);

// Rows per endpoint pair: mean |ring-to-ring distance - relocation-penalized
// distance| / d_G(o,x).  Samples without a giant proxy are skipped, counted
// in the `skipped` parameter column.
EstimateTable goodapprox_check(const FiniteRegion& region, double p,
                               const std::vector<std::pair<VertexId, VertexId>>& pairs,
                               double c_exp, const McRun& run);

// Per n: frequency of {d_G(o, nearest giant vertex) >= n}.
EstimateTable ring_distance_tail(const FiniteRegion& region, double p, VertexId o,
                                 const std::vector<int>& n_grid, const McRun& run);

// Per t: frequency of {augmented path length >= factor * t}.
EstimateTable pibar_tail(const FiniteRegion& region, VertexId o, VertexId x, double p,
                         double c_exp, double factor, const std::vector<int>& t_grid,
                         const McRun& run);

}  // namespace percchem
