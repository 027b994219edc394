#include "percchem/russo.hpp"

#include <bit>
#include <cmath>

#include "percchem/errors.hpp"
#include "percchem/rng.hpp"
#include "percchem/stats.hpp"

namespace percchem {

RussoReport russo_check(const GraphView& g, const Observable& f,
                        const std::vector<double>& p_grid, std::uint64_t check_seed) {
  const std::uint32_t m = g.edge_count();
  if (m > 20) throw config_error("refusing exact enumeration beyond 20 edges");
  const std::uint64_t n_cfg = 1ull << m;

  std::vector<double> fv(n_cfg);
  EdgeSet es(m);
  for (std::uint64_t mask = 0; mask < n_cfg; ++mask) {
    for (std::uint32_t e = 0; e < m; ++e) es.set(e, (mask >> e) & 1);
    fv[mask] = f(es);
  }

  RussoReport rep;
  rep.p_grid = p_grid;

  // monotone spot check on random comparable pairs: omega subset omega'
  // must give f(omega) >= f(omega')
  const std::uint64_t key = mix64(check_seed);
  const std::uint64_t by = n_cfg - 1;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const std::uint64_t a = mix64(key ^ (2 * i)) & by;
    const std::uint64_t b = a | (mix64(key ^ (2 * i + 1)) & by);
    if (fv[a] < fv[b] - 1e-12)
      throw precondition_error("observable is not decreasing on a comparable pair");
    ++rep.decreasing_pairs_checked;
  }

  std::vector<double> pow_p(m + 1), pow_q(m + 1);
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 1.0))
      throw config_error("derivative grid points must lie strictly inside (0,1)");
    pow_p[0] = pow_q[0] = 1.0;
    for (std::uint32_t k = 1; k <= m; ++k) {
      pow_p[k] = pow_p[k - 1] * p;
      pow_q[k] = pow_q[k - 1] * (1.0 - p);
    }

    KahanSum lhs;
    for (std::uint64_t mask = 0; mask < n_cfg; ++mask) {
      const auto o = static_cast<std::uint32_t>(std::popcount(mask));
      const std::uint32_t c = m - o;
      const double weight = o / p - c / (1.0 - p);
      lhs.add(fv[mask] * pow_p[o] * pow_q[c] * weight);
    }

    KahanSum rhs;
    for (std::uint32_t e = 0; e < m; ++e) {
      const std::uint64_t bit = 1ull << e;
      for (std::uint64_t mask = 0; mask < n_cfg; ++mask) {
        if (mask & bit) continue;
        const auto o = static_cast<std::uint32_t>(std::popcount(mask));
        rhs.add((fv[mask] - fv[mask | bit]) * pow_p[o] * pow_q[m - 1 - o]);
      }
    }

    rep.lhs.push_back(lhs.value());
    rep.rhs.push_back(-rhs.value());
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(lhs.value() + rhs.value()));
  }
  return rep;
}

}  // namespace percchem
