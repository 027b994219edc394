#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "percchem/coarse.hpp"
#include "percchem/graph.hpp"

namespace percchem {

// 1-chain over F2: a sorted set of edge ids of some host graph.  Addition
// is symmetric difference; a chain is a cycle iff its boundary is empty.
struct Chain1 {
  std::vector<EdgeId> edges;  // sorted, unique

  bool empty() const { return edges.empty(); }
  std::size_t size() const { return edges.size(); }
  bool operator==(const Chain1&) const = default;
};

Chain1 chain_from_edges(std::vector<EdgeId> edges);
Chain1 chain_xor(const Chain1& a, const Chain1& b);

// Odd-degree vertices of the chain, ascending.  A path x -> y has boundary
// {x, y}; a cycle has empty boundary.
std::vector<VertexId> boundary(const GraphView& g, const Chain1& c);

// Edge chain of a vertex path (consecutive vertices must be adjacent).
Chain1 path_chain(const GraphView& g, const std::vector<VertexId>& path);

// Vertices incident to at least one chain edge, ascending.
std::vector<VertexId> chain_support(const GraphView& g, const Chain1& c);

// Vertex sequence of a simple-path chain from x to y (endpoints must be the
// chain's boundary); [x] for the empty chain with x == y.
std::vector<VertexId> chain_to_path(const GraphView& g, const Chain1& c, VertexId x,
                                    VertexId y);

// Cycle-erased copy of a walk: scan once, drop the loop whenever a vertex
// repeats.  The result is a simple path with the same endpoints.
std::vector<VertexId> loop_erase(const std::vector<VertexId>& walk);

// Host-metric diameter of the chain's vertex support.
int support_diameter(const GraphView& g, const Chain1& c);

// Independent generating set of small cycles, with the elimination table
// needed to decompose arbitrary cycles over it.
struct CycleBasisDelta {
  int delta = 0;
  std::vector<Chain1> gens;  // original small cycles, each of diameter <= delta
  struct Row {
    Chain1 reduced;
    std::vector<std::uint32_t> combo;  // generator indices XORing to `reduced`
    EdgeId pivot = kNoEdge;            // max edge of `reduced`
  };
  std::vector<Row> rows;
  std::unordered_map<EdgeId, std::uint32_t> pivot_index;

  std::size_t rank() const { return rows.size(); }
  // Append candidate if independent; returns true when kept.
  bool insert(const Chain1& cycle);
  // Express q as an XOR of generators; returns the selected generator
  // indices, or nullopt when q is outside the span.
  std::optional<std::vector<std::uint32_t>> decompose(const Chain1& q) const;
};

// Enumerate fundamental cycles of the BFS tree of B(v, delta) for every v in
// the window, keep those of support diameter <= delta, reduce to an
// independent family.
CycleBasisDelta small_cycle_generators(const GraphView& g, int delta,
                                       const VertexSet& window);

// Decompose with verification: the XOR of the selected generators must
// reproduce q bit-exactly, else certification_error.  q must be a cycle.
std::vector<std::uint32_t> decompose_cycle(const GraphView& g, const CycleBasisDelta& basis,
                                           const Chain1& q);

struct CertificationResult {
  bool certified = false;
  Chain1 witness;             // an undecomposable fundamental cycle on failure
  std::size_t cycles_checked = 0;
  std::size_t basis_rank = 0;
};

// True iff every fundamental cycle of a spanning tree of the induced window
// subgraph decomposes over the delta-basis.
CertificationResult check_delta_simply_connected(const GraphView& g, int delta,
                                                 const VertexSet& window);

// Region-host convenience: builds the window B(base, W), errors when the
// delta-neighborhood of the window leaves the region.
CertificationResult certify_region(const FiniteRegion& region, int delta, int window_radius);

// Optional trace of a reroute run, for the demo tool and for debugging.
struct RerouteTrace {
  Chain1 beta, gamma;
  std::vector<VertexId> forbidden;
  std::vector<std::uint32_t> selection;
  Chain1 gamma2;       // beta + selected cycles meeting F
  Chain1 result;
};

// Path surgery around obstacles: given paths beta, gamma from x to y where
// gamma avoids the vertex set F, produce a simple x -> y path supported in
// (N(F, delta) u support(beta)) \ F.  The decomposition of beta + gamma
// must lie in the basis span (certification_error otherwise).
Chain1 reroute_path(const GraphView& g, const Chain1& beta, const Chain1& gamma,
                    const VertexSet& forbidden, int delta, const CycleBasisDelta& basis,
                    RerouteTrace* trace = nullptr);

// Follow an open coarse path microscopically: an open path from xi to zeta
// inside the union of scale-R balls around the centers of coarse_path.
// Preconditions: every center on the path is Open in msc; xi and zeta lie
// in the crossing components of the first/last centers.
std::vector<VertexId> macro_to_micro_path(const PercSample& sample, const CoarseGraph& cg,
                                          const MacroSiteConfig& msc,
                                          const std::vector<std::uint32_t>& coarse_path,
                                          VertexId xi, VertexId zeta);

struct RepairResult {
  std::vector<VertexId> path;
  int iterations = 0;
  int initial_excursions = 0;
};

// Iteratively splice an open path so that it stays inside the union of
// R-balls around the anchor coarse sites I and the Delta-neighborhood of
// the forbidden set F.  Each round removes the first excursion.
RepairResult geodesic_repair(const PercSample& sample, const CoarseGraph& cg,
                             const MacroSiteConfig& msc, const std::vector<VertexId>& pi,
                             int delta, int kprime, const CycleBasisDelta& coarse_basis);

}  // namespace percchem
