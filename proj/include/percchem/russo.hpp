#pragma once

#include <functional>
#include <vector>

#include "percchem/graph.hpp"

namespace percchem {

// observable on percolation configurations of a tiny host graph
using Observable = std::function<double(const EdgeSet&)>;

struct RussoReport {
  std::vector<double> p_grid;
  std::vector<double> lhs;  // d/dp E f(config at p), exact
  std::vector<double> rhs;  // -sum_e E[f(without e) - f(with e)], exact
  double max_abs_diff = 0;
  std::size_t decreasing_pairs_checked = 0;
};

// Exact two-sided evaluation of the derivative identity for a decreasing
// observable, by enumerating all 2^|E| configurations.  Refuses hosts with
// more than 20 edges; spot-checks monotonicity on random comparable pairs.
RussoReport russo_check(const GraphView& g, const Observable& f,
                        const std::vector<double>& p_grid,
                        std::uint64_t check_seed = 0x72757373);

}  // namespace percchem
