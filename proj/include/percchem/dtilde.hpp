#pragma once

#include <vector>

#include "percchem/percolation.hpp"

namespace percchem {

// Penalized chemical distance: relocate the endpoints to o~, x~ at cost M per
// unit of graph distance, then travel the open path pi between them.
//   value = |pi| + M * (d(o, o~) + d(x~, x)),  M = (ln d(o,x))^C
struct DtildeResult {
  double value = 0;
  VertexId o_tilde = kNoVertex;
  VertexId x_tilde = kNoVertex;
  std::vector<VertexId> pi;      // open path o~ -> x~; a single vertex when o~ = x~
  std::vector<VertexId> pi_bar;  // host geodesic o -> o~, then pi, then x~ -> x
  double M = 0;
};

// Exact minimizer via a two-potential shortest path: every vertex starts at
// cost M * d(o, v), open edges relax at unit cost, and the answer reads off
// min_v dist(v) + M * d(x, v).  Requires d(o, x) >= 3 so M >= 1.
DtildeResult dtilde(const PercSample& sample, VertexId o, VertexId x, double c_exp = 5.0);

// edge count of pi_bar, equal to d(o,o~) + |pi| + d(x~,x)
std::uint64_t pi_bar_length(const PercSample& sample, VertexId o, VertexId x,
                            double c_exp = 5.0);

}  // namespace percchem
