#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "percchem/errors.hpp"
#include "percchem/graph.hpp"

namespace percchem {

// Text format, one record per line:
//   region <family> dim <d> L <L> vertices <n> edges <m> base <id>
//   <id> <coord...>          (n lines, id ascending)
//   <u> <v>                  (m lines, edge id ascending)
void export_region(const FiniteRegion& region, std::ostream& os) {
  os << "region " << family_name(region.family) << " dim " << region.dim << " L "
     << region.radius << " vertices " << region.vertex_count() << " edges "
     << region.edge_count() << " base " << region.base << "\n";
  for (VertexId v = 0; v < region.vertex_count(); ++v) {
    os << v;
    for (std::int32_t c : region.coord(v)) os << ' ' << c;
    os << "\n";
  }
  for (EdgeId e = 0; e < region.edge_count(); ++e)
    os << region.g.ends[e].first << ' ' << region.g.ends[e].second << "\n";
}

FiniteRegion import_region(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw config_error("region import: empty input");
  std::istringstream head(line);
  std::string tag, fam, kw;
  FiniteRegion r;
  std::uint32_t n = 0, m = 0;
  int dim = 0, L = 0;
  VertexId base = 0;
  head >> tag >> fam;
  if (tag != "region") throw config_error("region import: bad header");
  while (head >> kw) {
    if (kw == "dim") head >> dim;
    else if (kw == "L") head >> L;
    else if (kw == "vertices") head >> n;
    else if (kw == "edges") head >> m;
    else if (kw == "base") head >> base;
    else throw config_error("region import: unknown header field " + kw);
  }
  if (fam == "zd") r.family = Family::HypercubicLattice;
  else if (fam == "heis") r.family = Family::HeisenbergCayley;
  else throw config_error("region import: unknown family " + fam);
  if (dim < 1 || n == 0) throw config_error("region import: bad dimensions");
  r.dim = dim;
  r.radius = L;
  r.base = base;
  r.coords.reserve(static_cast<std::size_t>(n) * dim);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!std::getline(is, line)) throw config_error("region import: truncated vertices");
    std::istringstream ls(line);
    VertexId id;
    ls >> id;
    if (!ls || id != i) throw config_error("region import: vertex ids must be dense");
    for (int k = 0; k < dim; ++k) {
      std::int32_t c;
      ls >> c;
      if (!ls) throw config_error("region import: short coordinate row");
      r.coords.push_back(c);
    }
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    if (!std::getline(is, line)) throw config_error("region import: truncated edges");
    std::istringstream ls(line);
    VertexId u, v;
    ls >> u >> v;
    if (!ls || u >= n || v >= n) throw config_error("region import: bad edge");
    edges.emplace_back(u, v);
  }
  r.g = GraphView::from_edges(n, std::move(edges));
  // rebuild derived data the same way the builders do
  r.base_dist.assign(n, 0);
  {
    std::vector<VertexId> q{r.base};
    std::vector<char> seen(n, 0);
    seen[r.base] = 1;
    for (std::size_t h = 0; h < q.size(); ++h) {
      VertexId u = q[h];
      for (VertexId w : r.g.neighbors(u)) {
        if (!seen[w]) {
          seen[w] = 1;
          r.base_dist[w] = r.base_dist[u] + 1;
          q.push_back(w);
        }
      }
    }
  }
  for (VertexId v = 0; v < n; ++v) r.coord_index.emplace(coord_row_hash(r.coord(v)), v);
  return r;
}

}  // namespace percchem
