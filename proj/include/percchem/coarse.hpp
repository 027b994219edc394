#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "percchem/graph.hpp"
#include "percchem/percolation.hpp"

namespace percchem {

// Coarse-grained picture at scale R: a maximal separated net, star-shaped
// Voronoi tiles, and the quotient graph on tiles.  All derived radii are
// floor divisions of R; R >= 60 keeps them nondegenerate.
struct CoarseGraph {
  const FiniteRegion* region = nullptr;
  int R = 0;
  int sep = 0;                        // floor(R/30), net separation and tile radius
  std::vector<VertexId> centers;      // net, ascending region ids
  std::vector<std::uint32_t> tile_of; // region vertex -> net index
  std::vector<std::int32_t> tile_dist;// region vertex -> distance to its center
  GraphView g;                        // quotient graph on net indices
  std::uint32_t max_degree = 0;
  std::vector<std::uint8_t> interior; // per center: B(center, R) inside region

  std::uint32_t center_count() const { return static_cast<std::uint32_t>(centers.size()); }
};

// Greedy maximal r-separated subset, scanning vertices in id order and
// accepting a vertex iff it is at distance >= r from everything accepted.
std::vector<VertexId> build_net(const FiniteRegion& region, int r);

struct VoronoiAssignment {
  std::vector<std::uint32_t> tile_of;
  std::vector<std::int32_t> tile_dist;
};

// Multi-source BFS from the net in net order; every vertex joins the
// smallest-index nearest center, which makes every tile star-shaped.
VoronoiAssignment voronoi_assign(const FiniteRegion& region,
                                 const std::vector<VertexId>& net);

CoarseGraph coarse_graph(const FiniteRegion& region, int R);

// Max over sampled interior center pairs of d_coarse(u,v) * R / d_region(u,v).
// Pairs are drawn deterministically from the seed; needs L >= 2R.
double coarse_contraction_bound(const CoarseGraph& cg, int n_pairs, std::uint64_t seed);

// Default macroscopic clearance constant: 3 * ceil(contraction bound).
int default_kprime(const CoarseGraph& cg);

// Renormalization event at v, scale R, evaluated in the sample:
//   crossing:   B(v, R/10) connected to the sphere at R inside B(v, R)
//   uniqueness: at most one open component of the ball meets both
//               B(v, R/5) and the sphere at R/2
// Full event = crossing && uniqueness.  The deleted variant keeps only the
// uniqueness clause, with deleted_edge forced closed.
bool uniqueness_event(const PercSample& sample, VertexId v, int R,
                      std::optional<EdgeId> deleted_edge = std::nullopt);

enum class SiteState : std::uint8_t { Closed = 0, Open = 1, Undefined = 2 };

// Per-center occupation by the renormalization event.  Boundary centers
// (ball not interior) are Undefined and excluded from all derived sets.
// Evaluation is lazy and memoized; materialize() forces every center.
struct MacroSiteConfig {
  const CoarseGraph* coarse = nullptr;
  const PercSample* sample = nullptr;
  mutable std::vector<std::uint8_t> memo;  // 3 = not yet evaluated

  SiteState state(std::uint32_t center_idx) const;
  void materialize() const;
};

MacroSiteConfig macro_site_config(const CoarseGraph& cg, const PercSample& sample);

// Forbidden set around the pair (x, y): the union of closed Delta-clusters
// (components of closed centers under coarse distance <= Delta) that meet
// the anchor set I = B(rho(x), K') u B(rho(y), K') u [rho(x), rho(y)].
struct ForbiddenSet {
  int delta = 0;
  int kprime = 0;
  std::vector<std::uint32_t> anchor;           // I, ascending net indices
  std::vector<std::uint32_t> closed;           // F, ascending net indices
  std::vector<std::uint32_t> flood_parent;     // per center: predecessor in the
                                               // Delta-flood, kNoVertex elsewhere
  std::vector<std::uint32_t> flood_seed;       // per center: the anchor it grew from

  bool in_anchor(std::uint32_t c) const;
  bool in_forbidden(std::uint32_t c) const;
};

ForbiddenSet forbidden_set(const MacroSiteConfig& msc, VertexId x, VertexId y,
                           int delta, int kprime);

// Size of the closed Delta-cluster of center v under iid site states
// Bernoulli(rho) drawn from (seed); 0 when v itself comes up open.  Fresh
// stream per call; the tail guarantee needs rho > 1 - 1/(2 D^Delta).
std::uint32_t precluster_sample(const CoarseGraph& cg, std::uint32_t center_idx,
                                int delta, double rho, std::uint64_t seed);

// Threshold density below which the precluster tail bound is void.
double precluster_rho0(std::uint32_t max_degree, int delta);

}  // namespace percchem
