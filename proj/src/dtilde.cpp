#include "percchem/dtilde.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "percchem/bfs.hpp"
#include "percchem/errors.hpp"

namespace percchem {

DtildeResult dtilde(const PercSample& sample, VertexId o, VertexId x, double c_exp) {
  const FiniteRegion& region = *sample.region;
  const GraphView& g = region.g;
  if (o >= g.n || x >= g.n) throw config_error("vertex id out of range");
  if (c_exp < 5.0) throw config_error("penalty exponent must be >= 5");
  const int d_ox = region.graph_distance(o, x);
  if (d_ox < 3) throw precondition_error("endpoint distance must be >= 3");

  DtildeResult res;
  res.M = std::pow(std::log(static_cast<double>(d_ox)), c_exp);

  BfsScratch s;
  bfs_run(g, o, s, BfsOptions{});
  std::vector<std::int32_t> dist_o(s.dist.begin(), s.dist.begin() + g.n);
  bfs_run(g, x, s, BfsOptions{});
  std::vector<std::int32_t> dist_x(s.dist.begin(), s.dist.begin() + g.n);

  // multi-source Dijkstra over open edges, seeded with the relocation costs
  std::vector<double> cost(g.n);
  std::vector<VertexId> origin(g.n), pred(g.n, kNoVertex);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (VertexId v = 0; v < g.n; ++v) {
    cost[v] = res.M * dist_o[v];
    origin[v] = v;
    pq.emplace(cost[v], v);
  }
  std::vector<char> settled(g.n, 0);
  while (!pq.empty()) {
    const auto [c, u] = pq.top();
    pq.pop();
    if (settled[u] || c > cost[u]) continue;
    settled[u] = 1;
    auto ns = g.neighbors(u);
    auto es = g.incident(u);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (!sample.open.test(es[i])) continue;
      const VertexId w = ns[i];
      const double cw = c + 1.0;
      if (cw < cost[w]) {
        cost[w] = cw;
        origin[w] = origin[u];
        pred[w] = u;
        pq.emplace(cw, w);
      }
    }
  }

  VertexId best = 0;
  double best_value = cost[0] + res.M * dist_x[0];
  for (VertexId v = 1; v < g.n; ++v) {
    const double val = cost[v] + res.M * dist_x[v];
    if (val < best_value) {
      best_value = val;
      best = v;
    }
  }
  res.value = best_value;
  res.x_tilde = best;
  res.o_tilde = origin[best];
  for (VertexId v = best;; v = pred[v]) {
    res.pi.push_back(v);
    if (pred[v] == kNoVertex) break;
  }
  std::reverse(res.pi.begin(), res.pi.end());

  const std::vector<VertexId> head = bfs_path(g, o, res.o_tilde, s, BfsOptions{});
  const std::vector<VertexId> tail = bfs_path(g, res.x_tilde, x, s, BfsOptions{});
  if (head.empty() || tail.empty())
    throw invariant_violation("region is not connected around the endpoints");
  res.pi_bar = head;
  res.pi_bar.insert(res.pi_bar.end(), res.pi.begin() + 1, res.pi.end());
  res.pi_bar.insert(res.pi_bar.end(), tail.begin() + 1, tail.end());
  return res;
}

std::uint64_t pi_bar_length(const PercSample& sample, VertexId o, VertexId x,
                            double c_exp) {
  const DtildeResult r = dtilde(sample, o, x, c_exp);
  return r.pi_bar.size() - 1;
}

}  // namespace percchem
