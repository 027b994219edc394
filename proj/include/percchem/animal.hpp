#pragma once

#include <cstdint>
#include <vector>

#include "percchem/graph.hpp"

namespace percchem {

// Exact maximum of the edge-indicator sum over self-avoiding paths from the
// base point with at most max_len edges, by branch-and-bound DFS.  Refuses
// max_len > 12 (exact-search bound).
int greedy_animal(const FiniteRegion& region, const std::vector<std::uint8_t>& indicator,
                  int max_len);

struct ColoringResult {
  int colors = 0;     // greedy color count of the edge distance graph
  int bound = 0;      // |B(base, 2N+2)| * interior degree + 1
  bool degenerate = false;  // 2N spans the region, adjacency is complete
  std::vector<std::uint32_t> color_of;  // per edge
  int N = 0;
};

// Greedy coloring of the graph on edges where two edges are adjacent when
// their endpoint distance is at most 2N; same-colored edges are 2N-separated.
ColoringResult coloring_bound(const FiniteRegion& region, int N);

}  // namespace percchem
