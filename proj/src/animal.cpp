#include "percchem/animal.hpp"

#include <algorithm>

#include "percchem/bfs.hpp"
#include "percchem/errors.hpp"

namespace percchem {

namespace {

struct AnimalSearch {
  const GraphView* g = nullptr;
  const std::vector<std::uint8_t>* ind = nullptr;
  std::vector<std::uint8_t> on_path;
  int max_len = 0;
  int best = 0;

  void dfs(VertexId u, int depth, int value) {
    best = std::max(best, value);
    // Even all-ones edges ahead cannot beat the incumbent.
    if (depth == max_len || value + (max_len - depth) <= best) return;
    const auto nb = g->neighbors(u);
    const auto ie = g->incident(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId w = nb[i];
      if (on_path[w]) continue;
      on_path[w] = 1;
      dfs(w, depth + 1, value + ((*ind)[ie[i]] ? 1 : 0));
      on_path[w] = 0;
    }
  }
};

}  // namespace

int greedy_animal(const FiniteRegion& region, const std::vector<std::uint8_t>& indicator,
                  int max_len) {
  const GraphView& g = region.g;
  if (indicator.size() != g.edge_count())
    throw precondition_error("edge indicator length does not match the region's edge count");
  if (max_len < 0) throw config_error("path length bound must be nonnegative");
  if (max_len > 12) throw config_error("refusing exact path search beyond length 12");
  AnimalSearch search;
  search.g = &g;
  search.ind = &indicator;
  search.on_path.assign(g.n, 0);
  search.max_len = max_len;
  search.on_path[region.base] = 1;
  search.dfs(region.base, 0, 0);
  return search.best;
}

ColoringResult coloring_bound(const FiniteRegion& region, int N) {
  if (N < 1) throw config_error("separation parameter N must be at least 1");
  const GraphView& g = region.g;
  const std::size_t m = g.edge_count();
  ColoringResult res;
  res.N = N;

  BfsScratch scratch;
  bfs_run(g, region.base, scratch, BfsOptions{});
  const int ecc = scratch.dist[scratch.queue.back()];
  // Any two vertices are within 2*ecc of each other through the base, so once
  // 2N reaches that every edge pair is adjacent and the coloring is complete.
  res.degenerate = (2 * N >= 2 * ecc);

  const BallResult witness = ball(region, region.base, 2 * N + 2);
  res.bound = static_cast<int>(witness.inside.count()) *
                  static_cast<int>(g.neighbors(region.base).size()) +
              1;

  constexpr std::uint32_t kUncolored = 0xffffffffu;
  res.color_of.assign(m, kUncolored);
  std::vector<std::uint8_t> used;
  BfsOptions near_opt;
  near_opt.max_depth = 2 * N;
  std::vector<VertexId> seeds(2);
  int max_color = -1;
  for (EdgeId e = 0; e < m; ++e) {
    used.assign(static_cast<std::size_t>(max_color + 2), 0);
    seeds[0] = g.ends[e].first;
    seeds[1] = g.ends[e].second;
    bfs_multi(g, seeds, scratch, near_opt);
    for (const VertexId w : scratch.queue) {
      for (const EdgeId f : g.incident(w)) {
        if (res.color_of[f] != kUncolored) used[res.color_of[f]] = 1;
      }
    }
    std::uint32_t c = 0;
    while (used[c]) ++c;
    res.color_of[e] = c;
    max_color = std::max(max_color, static_cast<int>(c));
  }
  res.colors = max_color + 1;
  return res;
}

}  // namespace percchem
