#include "percchem/table.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>

#include "percchem/errors.hpp"

namespace percchem {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
  }
  // shortest representation that parses back to the same double
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string EstimateTable::csv() const {
  std::string out;
  for (const auto& name : param_names) {
    out += name;
    out += ',';
  }
  out += "estimate,stderr,n,seed_lo,seed_hi\n";
  for (const Row& r : rows) {
    if (r.params.size() != param_names.size())
      throw invariant_violation("table row has the wrong parameter count");
    for (double p : r.params) {
      out += format_number(p);
      out += ',';
    }
    out += format_number(r.estimate);
    out += ',';
    out += format_number(r.se);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.seed_lo);
    out += ',';
    out += std::to_string(r.seed_hi);
    out += '\n';
  }
  return out;
}

void EstimateTable::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw resource_error("cannot open " + path + " for writing");
  f << csv();
  if (!f) throw resource_error("short write to " + path);
}

}  // namespace percchem
