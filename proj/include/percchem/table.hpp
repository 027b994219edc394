#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace percchem {

// Monte Carlo output rows: parameter tuple, point estimate, standard error,
// sample count, stream index range.  CSV emission is byte-deterministic.
struct EstimateTable {
  std::vector<std::string> param_names;
  struct Row {
    std::vector<double> params;
    double estimate = 0;
    double se = 0;
    std::uint64_t n = 0;
    std::uint64_t seed_lo = 0;
    std::uint64_t seed_hi = 0;
  };
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // run provenance

  std::string csv() const;
  void write_csv(const std::string& path) const;
};

// integral values print without a decimal point, everything else as %.17g
std::string format_number(double x);

}  // namespace percchem
