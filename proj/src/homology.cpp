#include "percchem/homology.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <utility>

#include "percchem/bfs.hpp"
#include "percchem/errors.hpp"

namespace percchem {

// ---- chain algebra ----

Chain1 chain_from_edges(std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  Chain1 c;
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if ((j - i) % 2 == 1) c.edges.push_back(edges[i]);
    i = j;
  }
  return c;
}

Chain1 chain_xor(const Chain1& a, const Chain1& b) {
  Chain1 c;
  std::set_symmetric_difference(a.edges.begin(), a.edges.end(), b.edges.begin(),
                                b.edges.end(), std::back_inserter(c.edges));
  return c;
}

namespace {

void check_edges(const GraphView& g, const Chain1& c) {
  for (EdgeId e : c.edges)
    if (e >= g.edge_count()) throw config_error("chain edge id out of range");
}

// symmetric difference of sorted index sets
std::vector<std::uint32_t> xor_indices(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<VertexId> boundary(const GraphView& g, const Chain1& c) {
  check_edges(g, c);
  std::vector<VertexId> ends;
  ends.reserve(2 * c.edges.size());
  for (EdgeId e : c.edges) {
    ends.push_back(g.ends[e].first);
    ends.push_back(g.ends[e].second);
  }
  std::sort(ends.begin(), ends.end());
  std::vector<VertexId> odd;
  for (std::size_t i = 0; i < ends.size();) {
    std::size_t j = i;
    while (j < ends.size() && ends[j] == ends[i]) ++j;
    if ((j - i) % 2 == 1) odd.push_back(ends[i]);
    i = j;
  }
  return odd;
}

Chain1 path_chain(const GraphView& g, const std::vector<VertexId>& path) {
  std::vector<EdgeId> edges;
  edges.reserve(path.size());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto e = g.find_edge(path[i], path[i + 1]);
    if (!e) throw precondition_error("consecutive path vertices are not adjacent");
    edges.push_back(*e);
  }
  return chain_from_edges(std::move(edges));
}

std::vector<VertexId> chain_support(const GraphView& g, const Chain1& c) {
  check_edges(g, c);
  std::vector<VertexId> sup;
  sup.reserve(2 * c.edges.size());
  for (EdgeId e : c.edges) {
    sup.push_back(g.ends[e].first);
    sup.push_back(g.ends[e].second);
  }
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  return sup;
}

std::vector<VertexId> chain_to_path(const GraphView& g, const Chain1& c, VertexId x,
                                    VertexId y) {
  check_edges(g, c);
  if (c.empty()) {
    if (x != y) throw precondition_error("empty chain cannot join distinct endpoints");
    return {x};
  }
  if (x == y) throw precondition_error("nonempty simple-path chain needs distinct endpoints");
  std::unordered_map<VertexId, std::vector<std::uint32_t>> inc;
  for (std::uint32_t i = 0; i < c.edges.size(); ++i) {
    inc[g.ends[c.edges[i]].first].push_back(i);
    inc[g.ends[c.edges[i]].second].push_back(i);
  }
  for (const auto& [v, lst] : inc) {
    const std::size_t want = (v == x || v == y) ? 1 : 2;
    if (lst.size() != want) throw precondition_error("chain is not a simple path");
  }
  std::vector<char> used(c.edges.size(), 0);
  std::vector<VertexId> path{x};
  VertexId cur = x;
  for (std::size_t step = 0; step < c.edges.size(); ++step) {
    std::uint32_t next = kNoEdge;
    for (std::uint32_t i : inc[cur])
      if (!used[i]) {
        next = i;
        break;
      }
    if (next == kNoEdge) break;
    used[next] = 1;
    const auto& [a, b] = g.ends[c.edges[next]];
    cur = (cur == a) ? b : a;
    path.push_back(cur);
  }
  if (cur != y || path.size() != c.edges.size() + 1)
    throw precondition_error("chain is not a single simple path between the endpoints");
  return path;
}

std::vector<VertexId> loop_erase(const std::vector<VertexId>& walk) {
  std::vector<VertexId> out;
  std::unordered_map<VertexId, std::size_t> pos;
  for (VertexId v : walk) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      while (out.size() > it->second + 1) {
        pos.erase(out.back());
        out.pop_back();
      }
    } else {
      pos.emplace(v, out.size());
      out.push_back(v);
    }
  }
  return out;
}

namespace {

// max host distance between support vertices; huge sentinel when the support
// spans several components of g
int support_spread(const GraphView& g, const std::vector<VertexId>& sup) {
  if (sup.size() <= 1) return 0;
  constexpr int kFar = std::numeric_limits<int>::max() / 4;
  int best = 0;
  std::unordered_map<VertexId, int> dist;
  std::vector<VertexId> queue;
  for (VertexId s0 : sup) {
    dist.clear();
    queue.clear();
    dist.emplace(s0, 0);
    queue.push_back(s0);
    std::size_t found = 1;
    for (std::size_t head = 0; head < queue.size() && found < sup.size(); ++head) {
      const VertexId u = queue[head];
      const int du = dist[u];
      for (VertexId w : g.neighbors(u)) {
        if (!dist.emplace(w, du + 1).second) continue;
        queue.push_back(w);
        if (std::binary_search(sup.begin(), sup.end(), w)) {
          ++found;
          best = std::max(best, du + 1);
        }
      }
    }
    if (found < sup.size()) return kFar;
  }
  return best;
}

}  // namespace

int support_diameter(const GraphView& g, const Chain1& c) {
  return support_spread(g, chain_support(g, c));
}

// ---- small-cycle basis ----

bool CycleBasisDelta::insert(const Chain1& cycle) {
  Chain1 r = cycle;
  std::vector<std::uint32_t> combo;
  while (!r.empty()) {
    auto it = pivot_index.find(r.edges.back());
    if (it == pivot_index.end()) break;
    r = chain_xor(r, rows[it->second].reduced);
    combo = xor_indices(combo, rows[it->second].combo);
  }
  if (r.empty()) return false;
  const auto idx = static_cast<std::uint32_t>(gens.size());
  gens.push_back(cycle);
  combo = xor_indices(combo, {idx});
  const EdgeId pivot = r.edges.back();
  pivot_index.emplace(pivot, static_cast<std::uint32_t>(rows.size()));
  rows.push_back(Row{std::move(r), std::move(combo), pivot});
  return true;
}

std::optional<std::vector<std::uint32_t>> CycleBasisDelta::decompose(const Chain1& q) const {
  Chain1 r = q;
  std::vector<std::uint32_t> sel;
  while (!r.empty()) {
    auto it = pivot_index.find(r.edges.back());
    if (it == pivot_index.end()) return std::nullopt;
    r = chain_xor(r, rows[it->second].reduced);
    sel = xor_indices(sel, rows[it->second].combo);
  }
  return sel;
}

CycleBasisDelta small_cycle_generators(const GraphView& g, int delta,
                                       const VertexSet& window) {
  if (delta < 0) throw config_error("delta must be >= 0");
  if (window.size() != g.n) throw config_error("window bitset does not match the graph");
  CycleBasisDelta basis;
  basis.delta = delta;
  if (delta == 0) return basis;

  BfsScratch s;
  BfsOptions opt;
  opt.max_depth = delta;
  std::vector<EdgeId> edges;
  for (VertexId v = 0; v < g.n; ++v) {
    if (!window.test(v)) continue;
    bfs_run(g, v, s, opt);
    for (VertexId a : s.queue) {
      auto ns = g.neighbors(a);
      auto es = g.incident(a);
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const VertexId b = ns[i];
        if (b < a || !s.seen.contains(b)) continue;
        const bool tree = (s.parent[b] == a && s.dist[b] == s.dist[a] + 1) ||
                          (s.parent[a] == b && s.dist[a] == s.dist[b] + 1);
        if (tree) continue;
        // fundamental cycle of the non-tree edge: both root paths plus the
        // edge itself, with the shared prefix cancelling mod 2
        edges.clear();
        edges.push_back(es[i]);
        for (VertexId c = a; s.parent[c] != kNoVertex; c = s.parent[c])
          edges.push_back(*g.find_edge(c, s.parent[c]));
        for (VertexId c = b; s.parent[c] != kNoVertex; c = s.parent[c])
          edges.push_back(*g.find_edge(c, s.parent[c]));
        Chain1 cyc = chain_from_edges(edges);
        if (cyc.empty()) continue;
        if (support_diameter(g, cyc) > delta) continue;
        basis.insert(cyc);
      }
    }
  }
  return basis;
}

std::vector<std::uint32_t> decompose_cycle(const GraphView& g, const CycleBasisDelta& basis,
                                           const Chain1& q) {
  if (!boundary(g, q).empty()) throw precondition_error("chain to decompose is not a cycle");
  auto sel = basis.decompose(q);
  if (!sel) throw certification_error("cycle lies outside the span of the small-cycle basis");
  Chain1 acc;
  for (std::uint32_t i : *sel) acc = chain_xor(acc, basis.gens[i]);
  if (!(acc == q))
    throw certification_error("basis decomposition failed to reproduce the cycle");
  return *sel;
}

CertificationResult check_delta_simply_connected(const GraphView& g, int delta,
                                                 const VertexSet& window) {
  CertificationResult res;
  CycleBasisDelta basis = small_cycle_generators(g, delta, window);
  res.basis_rank = basis.rank();

  // BFS spanning forest of the induced window subgraph
  std::vector<std::int32_t> fdist(g.n, -1);
  std::vector<VertexId> fparent(g.n, kNoVertex);
  std::vector<EdgeId> fedge(g.n, kNoEdge);
  std::vector<VertexId> queue;
  for (VertexId r = 0; r < g.n; ++r) {
    if (!window.test(r) || fdist[r] >= 0) continue;
    queue.clear();
    queue.push_back(r);
    fdist[r] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId u = queue[head];
      auto ns = g.neighbors(u);
      auto es = g.incident(u);
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const VertexId w = ns[i];
        if (!window.test(w) || fdist[w] >= 0) continue;
        fdist[w] = fdist[u] + 1;
        fparent[w] = u;
        fedge[w] = es[i];
        queue.push_back(w);
      }
    }
  }

  std::vector<EdgeId> edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& [a, b] = g.ends[e];
    if (!window.test(a) || !window.test(b)) continue;
    if (fedge[a] == e || fedge[b] == e) continue;
    edges.clear();
    edges.push_back(e);
    for (VertexId c = a; fparent[c] != kNoVertex; c = fparent[c]) edges.push_back(fedge[c]);
    for (VertexId c = b; fparent[c] != kNoVertex; c = fparent[c]) edges.push_back(fedge[c]);
    Chain1 cyc = chain_from_edges(edges);
    ++res.cycles_checked;
    auto sel = basis.decompose(cyc);
    if (!sel) {
      res.certified = false;
      res.witness = std::move(cyc);
      return res;
    }
    Chain1 acc;
    for (std::uint32_t i : *sel) acc = chain_xor(acc, basis.gens[i]);
    if (!(acc == cyc))
      throw invariant_violation("basis decomposition failed to reproduce a forest cycle");
  }
  res.certified = true;
  return res;
}

CertificationResult certify_region(const FiniteRegion& region, int delta, int window_radius) {
  if (delta < 1) throw config_error("delta must be >= 1");
  if (window_radius < 0) throw config_error("window radius must be >= 0");
  if (window_radius + delta > region.radius)
    throw geometry_error("window plus generator radius leaves the region");
  const BallResult w = ball(region, region.base, window_radius);
  return check_delta_simply_connected(region.g, delta, w.inside);
}

// ---- path surgery ----

Chain1 reroute_path(const GraphView& g, const Chain1& beta, const Chain1& gamma,
                    const VertexSet& forbidden, int delta, const CycleBasisDelta& basis,
                    RerouteTrace* trace) {
  if (forbidden.size() != g.n) throw config_error("forbidden bitset does not match the graph");
  if (basis.delta != delta) throw config_error("basis was built for a different delta");
  const auto bb = boundary(g, beta);
  const auto bg = boundary(g, gamma);
  if (bb.size() != 2 || bb != bg)
    throw precondition_error("the two chains must be paths sharing two distinct endpoints");
  for (VertexId v : chain_support(g, gamma))
    if (forbidden.test(v)) throw precondition_error("detour path touches the forbidden set");

  const Chain1 q = chain_xor(beta, gamma);
  const auto sel = decompose_cycle(g, basis, q);

  // flip exactly the small cycles that meet the forbidden set; the rest of
  // the decomposition stays on the detour side, which already avoids it
  std::vector<std::uint32_t> applied;
  Chain1 g2 = beta;
  for (std::uint32_t i : sel) {
    bool meets = false;
    for (VertexId v : chain_support(g, basis.gens[i]))
      if (forbidden.test(v)) {
        meets = true;
        break;
      }
    if (meets) {
      g2 = chain_xor(g2, basis.gens[i]);
      applied.push_back(i);
    }
  }
  for (EdgeId e : g2.edges)
    if (forbidden.test(g.ends[e].first) || forbidden.test(g.ends[e].second))
      throw invariant_violation("rerouted chain touches the forbidden set");

  // walk from x along unused chain edges, smallest edge id first; the walk
  // can only get stuck at the other odd vertex
  const VertexId x = bb[0], y = bb[1];
  std::unordered_map<VertexId, std::pair<std::vector<std::uint32_t>, std::size_t>> inc;
  for (std::uint32_t i = 0; i < g2.edges.size(); ++i) {
    inc[g.ends[g2.edges[i]].first].first.push_back(i);
    inc[g.ends[g2.edges[i]].second].first.push_back(i);
  }
  std::vector<char> used(g2.edges.size(), 0);
  std::vector<VertexId> walk{x};
  VertexId cur = x;
  for (std::size_t step = 0; step < g2.edges.size(); ++step) {
    auto it = inc.find(cur);
    if (it == inc.end()) break;
    auto& [lst, cursor] = it->second;
    while (cursor < lst.size() && used[lst[cursor]]) ++cursor;
    if (cursor == lst.size()) break;
    const std::uint32_t idx = lst[cursor];
    used[idx] = 1;
    const auto& [a, b] = g.ends[g2.edges[idx]];
    cur = (cur == a) ? b : a;
    walk.push_back(cur);
  }
  if (cur != y) throw invariant_violation("chain walk ended away from the target endpoint");

  const Chain1 result = path_chain(g, loop_erase(walk));
  if (trace) {
    trace->beta = beta;
    trace->gamma = gamma;
    trace->forbidden.clear();
    for (auto v = forbidden.find_first(); v != VertexSet::npos; v = forbidden.find_next(v))
      trace->forbidden.push_back(static_cast<VertexId>(v));
    trace->selection = applied;
    trace->gamma2 = g2;
    trace->result = result;
  }
  return result;
}

// ---- macroscopic to microscopic ----

namespace {

// component of z in the open subgraph of B(center, R) must reach both the
// R/5 ball and the R/2 sphere around the center
bool crossing_component_contains(const PercSample& sample, const FiniteRegion& region,
                                 VertexId center, int R, VertexId z, BfsScratch& sball,
                                 BfsScratch& sflood) {
  BfsOptions bo;
  bo.max_depth = R;
  bfs_run(region.g, center, sball, bo);
  if (!sball.seen.contains(z)) return false;
  sflood.mask.reset(region.g.n);
  for (VertexId w : sball.queue) sflood.mask.add(w);
  BfsOptions fo;
  fo.open = &sample.open;
  fo.use_mask = true;
  bfs_run(region.g, z, sflood, fo);
  const int r5 = R / 5, r2 = R / 2;
  bool meets_r5 = false, meets_sphere_r2 = false;
  for (VertexId w : sflood.queue) {
    if (sball.dist[w] <= r5) meets_r5 = true;
    if (sball.dist[w] == r2) meets_sphere_r2 = true;
  }
  return meets_r5 && meets_sphere_r2;
}

}  // namespace

std::vector<VertexId> macro_to_micro_path(const PercSample& sample, const CoarseGraph& cg,
                                          const MacroSiteConfig& msc,
                                          const std::vector<std::uint32_t>& coarse_path,
                                          VertexId xi, VertexId zeta) {
  if (msc.coarse != &cg || msc.sample != &sample)
    throw config_error("macro configuration does not match the coarse graph and sample");
  const FiniteRegion& region = *cg.region;
  if (coarse_path.empty()) throw precondition_error("empty coarse path");
  if (xi >= region.g.n || zeta >= region.g.n)
    throw config_error("vertex id out of range");
  for (std::size_t i = 0; i < coarse_path.size(); ++i) {
    if (coarse_path[i] >= cg.center_count()) throw config_error("center index out of range");
    if (msc.state(coarse_path[i]) != SiteState::Open)
      throw precondition_error("coarse path crosses a center that is not open");
    if (i + 1 < coarse_path.size() &&
        !cg.g.find_edge(coarse_path[i], coarse_path[i + 1]))
      throw precondition_error("coarse path steps between non-adjacent tiles");
  }

  const int R = cg.R;
  BfsScratch sball, sflood;
  if (!crossing_component_contains(sample, region, cg.centers[coarse_path.front()], R, xi,
                                   sball, sflood))
    throw precondition_error("start vertex is outside the crossing component of its tile");
  if (!crossing_component_contains(sample, region, cg.centers[coarse_path.back()], R, zeta,
                                   sball, sflood))
    throw precondition_error("end vertex is outside the crossing component of its tile");

  // open connection inside the union of the scale-R balls along the path
  sflood.mask.reset(region.g.n);
  for (std::uint32_t c : coarse_path) {
    BfsOptions bo;
    bo.max_depth = R;
    bfs_run(region.g, cg.centers[c], sball, bo);
    for (VertexId w : sball.queue) sflood.mask.add(w);
  }
  BfsOptions fo;
  fo.open = &sample.open;
  fo.use_mask = true;
  std::vector<VertexId> path = bfs_path(region.g, xi, zeta, sflood, fo);
  if (path.empty())
    throw invariant_violation("open tiles failed to connect microscopically");
  return path;
}

// ---- iterative excursion removal ----

namespace {

struct TileRun {
  std::uint32_t tile = 0;
  std::size_t lo = 0, hi = 0;  // inclusive index range in the carrier path
};

std::vector<TileRun> tile_runs(const CoarseGraph& cg, const std::vector<VertexId>& path,
                               std::vector<std::uint32_t>& run_of) {
  std::vector<TileRun> runs;
  run_of.assign(path.size(), 0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::uint32_t t = cg.tile_of[path[i]];
    if (runs.empty() || runs.back().tile != t) runs.push_back(TileRun{t, i, i});
    runs.back().hi = i;
    run_of[i] = static_cast<std::uint32_t>(runs.size() - 1);
  }
  return runs;
}

// expand one flood hop (coarse distance <= delta) into real coarse steps
void append_coarse_hop(const CoarseGraph& cg, std::uint32_t from, std::uint32_t to,
                       int delta, BfsScratch& s, std::vector<VertexId>& out) {
  BfsOptions opt;
  opt.max_depth = delta;
  const std::vector<VertexId> hop = bfs_path(cg.g, from, to, s, opt);
  if (hop.empty()) throw invariant_violation("flood predecessor is out of hop range");
  out.insert(out.end(), hop.begin() + 1, hop.end());
}

// walk from a qualifying tile into the anchor: climb flood predecessors when
// the tile is forbidden, otherwise the tile already sits in the anchor
std::uint32_t append_anchor_descent(const CoarseGraph& cg, const ForbiddenSet& fs,
                                    std::uint32_t start, const std::vector<char>& near_end,
                                    BfsScratch& s, std::vector<VertexId>& out) {
  if (near_end[start]) return start;
  std::uint32_t c = start;
  while (fs.flood_parent[c] != kNoVertex) {
    append_coarse_hop(cg, c, fs.flood_parent[c], fs.delta, s, out);
    c = fs.flood_parent[c];
  }
  if (!fs.in_anchor(c)) throw invariant_violation("flood climb ended outside the anchor");
  return c;
}

int count_excursions(const std::vector<VertexId>& path, const StampSet& tube) {
  int n = 0;
  bool in_run = false;
  for (VertexId v : path) {
    const bool outside = !tube.contains(v);
    if (outside && !in_run) ++n;
    in_run = outside;
  }
  return n;
}

}  // namespace

RepairResult geodesic_repair(const PercSample& sample, const CoarseGraph& cg,
                             const MacroSiteConfig& msc, const std::vector<VertexId>& pi,
                             int delta, int kprime, const CycleBasisDelta& coarse_basis) {
  if (msc.coarse != &cg || msc.sample != &sample)
    throw config_error("macro configuration does not match the coarse graph and sample");
  if (coarse_basis.delta != delta) throw config_error("basis was built for a different delta");
  const FiniteRegion& region = *cg.region;
  const GraphView& g = region.g;
  if (pi.empty()) throw precondition_error("empty carrier path");
  for (std::size_t i = 0; i + 1 < pi.size(); ++i) {
    const auto e = g.find_edge(pi[i], pi[i + 1]);
    if (!e || !sample.open.test(*e))
      throw precondition_error("carrier path is not an open path");
  }
  const VertexId x = pi.front(), y = pi.back();

  const ForbiddenSet fs = forbidden_set(msc, x, y, delta, kprime);
  const std::uint32_t nc = cg.center_count();

  // anchor tube sites: the anchor itself plus the delta-neighborhood of the
  // forbidden clusters
  std::vector<std::uint32_t> tube_sites = fs.anchor;
  BfsScratch cs;
  if (!fs.closed.empty()) {
    BfsOptions opt;
    opt.max_depth = delta;
    bfs_multi(cg.g, fs.closed, cs, opt);
    tube_sites.insert(tube_sites.end(), cs.queue.begin(), cs.queue.end());
  }
  std::sort(tube_sites.begin(), tube_sites.end());
  tube_sites.erase(std::unique(tube_sites.begin(), tube_sites.end()), tube_sites.end());

  // microscopic tube: union of scale-R balls around the tube sites
  StampSet tube;
  tube.reset(g.n);
  {
    BfsScratch sb;
    BfsOptions bo;
    bo.max_depth = cg.R;
    for (std::uint32_t c : tube_sites) {
      bfs_run(g, cg.centers[c], sb, bo);
      for (VertexId w : sb.queue) tube.add(w);
    }
  }

  // coarse clearance balls around the endpoint tiles
  std::vector<char> near_x(nc, 0), near_y(nc, 0);
  {
    BfsOptions opt;
    opt.max_depth = kprime - 1;
    bfs_run(cg.g, cg.tile_of[x], cs, opt);
    for (VertexId c : cs.queue) near_x[c] = 1;
    bfs_run(cg.g, cg.tile_of[y], cs, opt);
    for (VertexId c : cs.queue) near_y[c] = 1;
  }
  const auto qualifies_x = [&](std::uint32_t t) { return fs.in_forbidden(t) || near_x[t]; };
  const auto qualifies_y = [&](std::uint32_t t) { return fs.in_forbidden(t) || near_y[t]; };

  VertexSet fbits(nc);
  for (std::uint32_t c : fs.closed) fbits.set(c);

  RepairResult res;
  std::vector<VertexId> cur = pi;
  res.initial_excursions = count_excursions(cur, tube);
  const int cap = res.initial_excursions + 1;
  std::vector<std::uint32_t> run_of;

  while (true) {
    std::size_t i0 = cur.size();
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (!tube.contains(cur[i])) {
        i0 = i;
        break;
      }
    if (i0 == cur.size()) break;
    std::size_t i1 = i0;
    while (i1 + 1 < cur.size() && !tube.contains(cur[i1 + 1])) ++i1;
    if (++res.iterations > cap)
      throw invariant_violation("excursion removal failed to make progress");
    if (i0 == 0 || i1 + 1 == cur.size())
      throw invariant_violation("carrier path endpoint lies outside the tube");

    const std::vector<TileRun> runs = tile_runs(cg, cur, run_of);
    const std::size_t pos0 = run_of[i0], pos1 = run_of[i1];

    // nearest qualifying tiles on either side of the excursion; the entry
    // tiles just past them land in the tube sites
    std::size_t pL = pos0;
    do {
      --pL;
    } while (!qualifies_x(runs[pL].tile));
    std::size_t pR = pos1;
    do {
      ++pR;
    } while (!qualifies_y(runs[pR].tile));
    const std::uint32_t tile_u = runs[pL + 1].tile, tile_v = runs[pR - 1].tile;

    std::vector<VertexId> coarse_route;
    if (tile_u == tile_v) {
      coarse_route = {tile_u};
    } else {
      // detour: the tile trace of the path across the excursion
      std::vector<VertexId> gamma_walk;
      for (std::size_t p = pL + 1; p <= pR - 1; ++p) gamma_walk.push_back(runs[p].tile);
      const std::vector<VertexId> gamma_path = loop_erase(gamma_walk);
      for (VertexId t : gamma_path)
        if (fbits.test(t)) throw invariant_violation("tile trace crosses a forbidden tile");

      // reference: drop to the anchor on both sides and cross inside it
      std::vector<VertexId> beta_walk{tile_u, runs[pL].tile};
      const std::uint32_t endL =
          append_anchor_descent(cg, fs, runs[pL].tile, near_x, cs, beta_walk);
      std::vector<VertexId> right_walk{tile_v, runs[pR].tile};
      const std::uint32_t endR =
          append_anchor_descent(cg, fs, runs[pR].tile, near_y, cs, right_walk);
      cs.prepare(nc);
      cs.mask.reset(nc);
      for (std::uint32_t c : fs.anchor) cs.mask.add(c);
      BfsOptions ao;
      ao.use_mask = true;
      const std::vector<VertexId> across = bfs_path(cg.g, endL, endR, cs, ao);
      if (across.empty()) throw invariant_violation("anchor is not coarse-connected");
      beta_walk.insert(beta_walk.end(), across.begin() + 1, across.end());
      beta_walk.insert(beta_walk.end(), right_walk.rbegin() + 1, right_walk.rend());

      const Chain1 beta = path_chain(cg.g, loop_erase(beta_walk));
      const Chain1 gamma = path_chain(cg.g, gamma_path);
      const Chain1 routed =
          reroute_path(cg.g, beta, gamma, fbits, delta, coarse_basis, nullptr);
      coarse_route = chain_to_path(cg.g, routed, tile_u, tile_v);
    }

    std::size_t iu = cur.size(), iv = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cg.tile_of[cur[i]] == tile_u && iu == cur.size()) iu = i;
      if (cg.tile_of[cur[i]] == tile_v) iv = i;
    }
    if (iu >= iv) throw invariant_violation("splice endpoints are out of order");

    const std::vector<VertexId> middle =
        macro_to_micro_path(sample, cg, msc, coarse_route, cur[iu], cur[iv]);
    std::vector<VertexId> next(cur.begin(), cur.begin() + iu + 1);
    next.insert(next.end(), middle.begin() + 1, middle.end());
    next.insert(next.end(), cur.begin() + iv + 1, cur.end());
    cur = loop_erase(next);
  }

  res.path = std::move(cur);
  return res;
}

}  // namespace percchem
