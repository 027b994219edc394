#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace percchem {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

using VertexSet = boost::dynamic_bitset<>;
using EdgeSet = boost::dynamic_bitset<>;

enum class Family { HypercubicLattice, HeisenbergCayley };

const char* family_name(Family f);
std::uint64_t coord_row_hash(std::span<const std::int32_t> c);

// Plain CSR adjacency, shared by regions and coarse graphs.  Neighbor lists
// are sorted ascending so that every BFS in the project is deterministic.
struct GraphView {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> off;                   // n + 1 offsets
  std::vector<VertexId> nbr;                        // neighbor vertex
  std::vector<EdgeId> nbr_edge;                     // parallel edge ids
  std::vector<std::pair<VertexId, VertexId>> ends;  // per edge, u < v

  std::uint32_t vertex_count() const { return n; }
  std::uint32_t edge_count() const { return static_cast<std::uint32_t>(ends.size()); }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {nbr.data() + off[v], nbr.data() + off[v + 1]};
  }
  std::span<const EdgeId> incident(VertexId v) const {
    return {nbr_edge.data() + off[v], nbr_edge.data() + off[v + 1]};
  }
  VertexId other_end(EdgeId e, VertexId v) const {
    const auto& [a, b] = ends[e];
    return a == v ? b : a;
  }
  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

  static GraphView from_edges(std::uint32_t n,
                              std::vector<std::pair<VertexId, VertexId>> edges);
};

// A ball-shaped finite realization of an infinite transitive graph:
// either the word ball of Z^d (L1 ball, nearest-neighbor edges) or of the
// discrete Heisenberg group with generators X, Y and inverses.
//
// Vertex ids are dense and in BFS-from-base order; this fixed total order
// is the tie-breaking order used everywhere downstream (nets, Voronoi
// tiles, cluster labels, geodesic parents).
struct FiniteRegion {
  Family family = Family::HypercubicLattice;
  int dim = 0;     // coordinate arity: d for Z^d, 3 for Heisenberg (a,b,c)
  int radius = 0;  // L
  VertexId base = 0;
  GraphView g;
  std::vector<std::int32_t> coords;     // n * dim, row per vertex
  std::vector<std::int32_t> base_dist;  // d_G(base, v), the BFS level

  std::uint32_t vertex_count() const { return g.n; }
  std::uint32_t edge_count() const { return g.edge_count(); }
  std::span<const std::int32_t> coord(VertexId v) const {
    return {coords.data() + static_cast<std::size_t>(v) * dim,
            static_cast<std::size_t>(dim)};
  }
  std::optional<VertexId> vertex_at(std::span<const std::int32_t> c) const;

  // Exact distance in the region (induced subgraph on the ball).  Equals the
  // infinite-graph distance whenever interior_margin(u, v) certifies that a
  // geodesic ball around one endpoint fits inside the region.
  int graph_distance(VertexId u, VertexId v) const;
  bool interior_margin(VertexId u, VertexId v) const;

  // coord-row hash -> vertex ids with that hash (collisions verified on use)
  std::unordered_multimap<std::uint64_t, VertexId> coord_index;
};

// Word ball of Z^d of radius L.  L = 0 is the degenerate single-vertex ball.
// Throws resource_error when the ball would blow the memory budget (see
// memory_budget_mb), config_error on bad d.
FiniteRegion build_lattice(int d, int L);

// Word ball of the discrete Heisenberg group H3(Z), generators
// X = (1,0,0), Y = (0,1,0) and inverses, group law
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b').
FiniteRegion build_heisenberg(int L);

// Memory cap for region construction, in MB.  Reads PERC_CHEM_BUDGET_MB once.
std::size_t memory_budget_mb();

struct BallResult {
  VertexSet inside;               // vertices at distance <= r
  std::vector<VertexId> sphere;   // distance exactly r, ascending
  int r = 0;
};

// Metric ball/sphere around v in the region metric.
BallResult ball(const FiniteRegion& region, VertexId v, int r);

// |B(base, r)| for r = 0..rmax, one BFS.
std::vector<std::uint64_t> ball_growth(const FiniteRegion& region, int rmax);

// ---- text export (used by the CLI and by test oracles) ----
void export_region(const FiniteRegion& region, std::ostream& os);
FiniteRegion import_region(std::istream& is);

}  // namespace percchem
