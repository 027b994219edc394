#pragma once

#include <cstdint>
#include <vector>

#include "percchem/graph.hpp"

namespace percchem {

// O(1)-reset membership set via epoch stamps.
struct StampSet {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  void reset(std::size_t n) {
    if (stamp.size() < n) stamp.assign(n, 0);
    if (++epoch == 0) {  // wrapped; wipe
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
  }
  bool contains(std::uint32_t v) const { return stamp[v] == epoch; }
  void add(std::uint32_t v) { stamp[v] = epoch; }
};

// Reusable BFS workspace.  One per thread; public wrappers that allocate
// their own scratch are safe for concurrent use on a shared graph.
struct BfsScratch {
  StampSet seen;
  StampSet mask;  // optional vertex restriction, managed by the caller
  std::vector<std::int32_t> dist;
  std::vector<VertexId> parent;
  std::vector<VertexId> queue;
  std::vector<VertexId> owner;  // multi-source: owning seed index

  void prepare(std::uint32_t n) {
    seen.reset(n);
    if (dist.size() < n) dist.resize(n);
    if (parent.size() < n) parent.resize(n);
    if (owner.size() < n) owner.resize(n);
    queue.clear();
  }
};

struct BfsOptions {
  const EdgeSet* open = nullptr;  // traverse only these edges
  EdgeId skip_edge = kNoEdge;     // treat this edge as absent
  bool use_mask = false;          // restrict to scratch.mask vertices
  int max_depth = -1;             // stop expanding past this level
  VertexId target = kNoVertex;    // early exit when reached
};

// BFS from src.  Visited vertices end up in scratch.queue with dist/parent
// filled; parents use the smallest-id-neighbor-at-previous-level rule that
// CSR order gives us for free.  Returns dist(target) or -1.
int bfs_run(const GraphView& g, VertexId src, BfsScratch& s, const BfsOptions& opt);

// Multi-source variant: seeds at distance 0 in the given order, FIFO.  Owner
// of a vertex is the seed whose wave reaches it first; with seeds listed in
// increasing id order this realizes the smallest-nearest-seed rule.
void bfs_multi(const GraphView& g, const std::vector<VertexId>& seeds, BfsScratch& s,
               const BfsOptions& opt);

// Path src -> dst recovered from parents after bfs_run; empty if unreachable.
std::vector<VertexId> bfs_path(const GraphView& g, VertexId src, VertexId dst,
                               BfsScratch& s, const BfsOptions& opt);

}  // namespace percchem
