#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "percchem/bfs.hpp"
#include "percchem/graph.hpp"

namespace percchem {

// One Bernoulli bond configuration on a region.  Edge e is open iff
// uniform01(seed, e) < p, so configurations at the same seed are coupled
// monotonically across p.
struct PercSample {
  const FiniteRegion* region = nullptr;
  double p = 0;
  std::uint64_t seed = 0;
  EdgeSet open;
};

PercSample sample_config(const FiniteRegion& region, double p, std::uint64_t seed);
// Refill in place (keeps the bit storage); for hot Monte Carlo loops.
void resample(PercSample& sample, double p, std::uint64_t seed);

// Open-cluster structure.  Components are numbered by their smallest vertex
// id; the giant proxy is the largest cluster, ties to the smaller number.
struct ClusterLabeling {
  std::vector<std::uint32_t> label;   // per vertex, dense component ids
  std::vector<std::uint32_t> size;    // per component
  std::uint32_t giant = 0;            // component id of the proxy
};

ClusterLabeling clusters(const PercSample& sample);

// Shortest open-path length, or nullopt when u and v are not connected in
// the sample.  Allocates its own scratch; safe to call concurrently.
std::optional<int> chemical_distance(const PercSample& sample, VertexId u, VertexId v);

// Same, with edge e forced closed: the bypass length of e's endpoints.
std::optional<int> chemical_distance_deleted(const PercSample& sample, EdgeId e);

// Scratch-reusing core used by the estimators.
int chem_dist(const PercSample& sample, VertexId u, VertexId v, BfsScratch& s,
              EdgeId skip = kNoEdge, int max_depth = -1);

// Nearest vertex of the giant proxy in the region metric; equidistant
// candidates are drawn uniformly, keyed by (tie_seed, u).  Restricted to
// d(u, base) <= L/2 so the returned point is an interior object.
struct RingHit {
  VertexId v = kNoVertex;
  int dist = 0;  // d_G(u, v)
};

RingHit ring_point_hit(const PercSample& sample, const ClusterLabeling& cl, VertexId u,
                       std::uint64_t tie_seed, BfsScratch& s);
VertexId ring_point(const PercSample& sample, const ClusterLabeling& cl, VertexId u,
                    std::uint64_t tie_seed);
VertexId ring_point_core(const PercSample& sample, const ClusterLabeling& cl, VertexId u,
                         std::uint64_t tie_seed, BfsScratch& s);

}  // namespace percchem
