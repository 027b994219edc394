#include "percchem/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "percchem/animal.hpp"
#include "percchem/coarse.hpp"
#include "percchem/errors.hpp"
#include "percchem/homology.hpp"
#include "percchem/montecarlo.hpp"
#include "percchem/rng.hpp"
#include "percchem/russo.hpp"
#include "percchem/stats.hpp"
#include "percchem/table.hpp"

namespace percchem {

namespace {

constexpr const char* kVersion = "0.1.0";

// ---- option access ----

// Reads typed options out of the flat map, materializing defaults back into
// it so the effective config is what gets hashed and recorded.
struct OptReader {
  std::map<std::string, std::string>* opts;
  std::set<std::string> seen;

  std::string str(const std::string& key, const std::string& fallback) {
    seen.insert(key);
    auto it = opts->find(key);
    if (it == opts->end()) it = opts->emplace(key, fallback).first;
    return it->second;
  }
  long long integer(const std::string& key, long long fallback) {
    const std::string raw = str(key, std::to_string(fallback));
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw config_error("option " + key + ": cannot parse '" + raw + "' as an integer");
    }
  }
  double real(const std::string& key, double fallback) {
    const std::string raw = str(key, format_number(fallback));
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw config_error("option " + key + ": cannot parse '" + raw + "' as a number");
    }
  }
  std::uint64_t uint(const std::string& key, std::uint64_t fallback) {
    const long long v = integer(key, static_cast<long long>(fallback));
    if (v < 0) throw config_error("option " + key + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  void reject_unknown(const std::string& kind) const {
    for (const auto& [key, value] : *opts) {
      if (!seen.count(key))
        throw config_error("unknown option " + key + " for experiment " + kind);
    }
  }
};

std::vector<int> int_list(const std::string& raw, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("option " + key + ": cannot parse '" + item + "' as an integer");
    }
  }
  if (out.empty()) throw config_error("option " + key + " is empty");
  return out;
}

std::vector<int> span_grid(int lo, int hi, int step, const std::string& what) {
  if (step <= 0) throw config_error(what + " step must be positive");
  if (hi < lo) throw config_error(what + " grid is empty (hi < lo)");
  std::vector<int> out;
  for (int t = lo; t <= hi; t += step) out.push_back(t);
  return out;
}

std::vector<double> span_grid_real(double lo, double hi, double step, const std::string& what) {
  if (!(step > 0)) throw config_error(what + " step must be positive");
  if (hi < lo) throw config_error(what + " grid is empty (hi < lo)");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    double v = lo + k * step;
    if (v > hi + 1e-9) break;
    // grid values land on the 1e-9 lattice (and hit hi exactly), so p = 1
    // really is 1 and CSV parameters read back cleanly
    const double snapped = std::round(v * 1e9) / 1e9;
    if (std::abs(snapped - v) < 1e-12) v = snapped;
    if (std::abs(v - hi) < 1e-9) v = hi;
    out.push_back(v);
    if (v == hi) break;
  }
  return out;
}

FiniteRegion build_region(OptReader& r) {
  const std::string family = r.str("family", "zd");
  const int L = static_cast<int>(r.integer("L", 30));
  if (family == "zd") {
    const int dim = static_cast<int>(r.integer("dim", 2));
    return build_lattice(dim, L);
  }
  if (family == "heis") return build_heisenberg(L);
  throw config_error("unknown family '" + family + "' (use zd or heis)");
}

// endpoints at graph distance `dist`, split across the base along the first
// generator axis
std::pair<VertexId, VertexId> axis_pair(const FiniteRegion& region, int dist) {
  if (dist < 1) throw config_error("dist must be positive");
  std::vector<std::int32_t> a(static_cast<std::size_t>(region.dim), 0);
  std::vector<std::int32_t> b(a);
  a[0] = -(dist / 2);
  b[0] = dist - dist / 2;
  const auto va = region.vertex_at(a);
  const auto vb = region.vertex_at(b);
  if (!va || !vb) throw geometry_error("axis endpoints missing from the region");
  return {*va, *vb};
}

void require_l(int L, int min_l, const std::string& why) {
  if (L < min_l)
    throw geometry_error(why + "; need L >= " + std::to_string(min_l) + ", got " +
                         std::to_string(L));
}

std::string coord_str(const FiniteRegion& region, VertexId v) {
  std::string out = "(";
  const auto c = region.coord(v);
  for (int i = 0; i < region.dim; ++i) {
    if (i) out += ",";
    out += std::to_string(c[i]);
  }
  out += ")";
  return out;
}

// ---- output plumbing ----

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw resource_error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw resource_error("short write to " + path.string());
}

// Bodies buffer their outputs here; files land on disk only after the whole
// option set has parsed, because the directory name hashes the effective
// config.
struct RunContext {
  RunResult result;
  std::vector<std::pair<std::string, std::string>> pending;
  nlohmann::json manifest_extra = nlohmann::json::object();

  void emit(const std::string& name, const std::string& content) {
    pending.emplace_back(name, content);
    result.files.push_back(name);
  }
  void emit(const std::string& name, const EstimateTable& table) {
    emit(name, table.csv());
    if (!table.metadata.empty()) {
      nlohmann::json meta = nlohmann::json::object();
      for (const auto& [key, value] : table.metadata) meta[key] = value;
      manifest_extra["tables"][name] = std::move(meta);
    }
  }
};

// counts reconstructed from a frequency table row, for slope reporting
SlopeFit table_log_slope(const EstimateTable& table) {
  std::vector<double> ts;
  std::vector<std::uint64_t> ks, ns;
  for (const auto& row : table.rows) {
    ts.push_back(row.params.at(0));
    ks.push_back(static_cast<std::uint64_t>(
        std::llround(row.estimate * static_cast<double>(row.n))));
    ns.push_back(row.n);
  }
  return log_frequency_slope(ts, ks, ns);
}

// ---- experiment bodies ----

void run_tail(OptReader& r, const FiniteRegion& region, unsigned workers, RunContext& ctx) {
  const double p = r.real("p", 0.65);
  const double K = r.real("K", 1.0);
  const int dist = static_cast<int>(r.integer("dist", 40));
  require_l(region.radius, (3 * dist + 1) / 2, "tail endpoints need interior margin");
  McRun run;
  run.seed = r.uint("seed", 1);
  run.index_lo = r.uint("index-lo", 0);
  run.n = r.uint("n", 10000);
  run.workers = workers;
  const auto t_grid = span_grid(static_cast<int>(r.integer("t-lo", dist)),
                                static_cast<int>(r.integer("t-hi", 3 * dist)),
                                static_cast<int>(r.integer("t-step", 10)), "t");
  const auto [x, y] = axis_pair(region, dist);
  const TailEstimate te = tail_estimate(region, x, y, p, K, t_grid, run);
  ctx.emit("tail_joint.csv", te.joint);
  ctx.emit("tail_conditional.csv", te.conditional);
  const SlopeFit fit = table_log_slope(te.joint);
  ctx.manifest_extra["connected"] = te.connected;
  ctx.manifest_extra["slope"] = fit.slope;
  ctx.manifest_extra["slope_se"] = fit.slope_se;
  ctx.manifest_extra["slope_rows_used"] = fit.used;
  std::ostringstream os;
  os << "tail: connected " << te.connected << "/" << run.n << ", log-frequency slope "
     << format_number(fit.slope) << " (se " << format_number(fit.slope_se) << ", rows "
     << fit.used << ")";
  ctx.result.summary = os.str();
}

void run_timeconst(OptReader& r, const FiniteRegion& region, unsigned workers,
                   RunContext& ctx) {
  const double p = r.real("p", 0.7);
  const auto n_grid = span_grid(static_cast<int>(r.integer("n-lo", 10)),
                                static_cast<int>(r.integer("n-hi", region.radius / 2)),
                                static_cast<int>(r.integer("n-step", 10)), "n");
  require_l(region.radius, 2 * n_grid.back(), "direction endpoints need the L/2 core");
  McRun run;
  run.seed = r.uint("seed", 1);
  run.index_lo = r.uint("index-lo", 0);
  run.n = r.uint("samples", 10000);
  run.workers = workers;
  const EstimateTable table = time_constant(region, p, n_grid, run);
  ctx.emit("timeconst.csv", table);
  const auto& last = table.rows.back();
  ctx.manifest_extra["mu_hat"] = last.estimate;
  ctx.manifest_extra["mu_hat_se"] = last.se;
  std::ostringstream os;
  os << "timeconst: speed estimate at the largest distance (" << format_number(last.params[1])
     << ") is " << format_number(last.estimate) << " +- " << format_number(last.se)
     << "; finite-n values are upward-biased, extrapolate from the tail of the table";
  ctx.result.summary = os.str();
}

void run_lipschitz(OptReader& r, const FiniteRegion& region, unsigned workers,
                   RunContext& ctx) {
  const int dist = static_cast<int>(r.integer("dist", 60));
  require_l(region.radius, (3 * dist + 1) / 2, "sweep endpoints need interior margin");
  const auto p_grid = span_grid_real(r.real("p-lo", 0.60), r.real("p-hi", 1.00),
                                     r.real("p-step", 0.05), "p");
  McRun run;
  run.seed = r.uint("seed", 1);
  run.index_lo = r.uint("index-lo", 0);
  run.n = r.uint("n", 10000);
  run.workers = workers;
  const auto [o, x] = axis_pair(region, dist);
  const LipschitzSweep sweep = lipschitz_sweep(region, o, x, p_grid, run);
  ctx.emit("lipschitz_per_p.csv", sweep.per_p);
  ctx.emit("lipschitz_diffs.csv", sweep.diffs);
  ctx.manifest_extra["max_ratio"] = sweep.max_ratio;
  ctx.manifest_extra["skipped"] = sweep.skipped;
  std::ostringstream os;
  os << "lipschitz: max finite-difference ratio " << format_number(sweep.max_ratio) << ", "
     << sweep.skipped << " samples not connected at p = " << format_number(p_grid.front());
  ctx.result.summary = os.str();
}

void run_coarse_check(OptReader& r, const FiniteRegion& region, RunContext& ctx) {
  const auto scales = span_grid(static_cast<int>(r.integer("R-lo", 60)),
                                static_cast<int>(r.integer("R-hi", 120)),
                                static_cast<int>(r.integer("R-step", 30)), "R");
  const int pairs = static_cast<int>(r.integer("pairs", 64));
  const std::uint64_t seed = r.uint("seed", 1);

  std::string csv =
      "scale,net_size,max_degree,degree_bound,sandwich_violations,star_violations,"
      "contraction_ratio,contraction_bound\n";
  std::ostringstream os;
  os << "coarse-check:";
  bool all_clean = true;
  for (const int R : scales) {
    const CoarseGraph cg = coarse_graph(region, R);
    const int inner_r = R / 60 - 1;
    const int outer_r = cg.sep;

    std::uint64_t sandwich = 0;
    BfsScratch s;
    for (std::uint32_t c = 0; c < cg.center_count(); ++c) {
      BfsOptions opt;
      opt.max_depth = inner_r;
      bfs_run(region.g, cg.centers[c], s, opt);
      for (const VertexId w : s.queue)
        if (cg.tile_of[w] != c) ++sandwich;
    }
    for (VertexId v = 0; v < region.g.n; ++v)
      if (cg.tile_dist[v] > outer_r) ++sandwich;

    std::uint64_t star = 0;
    for (VertexId v = 0; v < region.g.n; ++v) {
      if (cg.tile_dist[v] == 0) continue;
      bool has_parent = false;
      for (const VertexId w : region.g.neighbors(v)) {
        if (cg.tile_of[w] == cg.tile_of[v] && cg.tile_dist[w] == cg.tile_dist[v] - 1) {
          has_parent = true;
          break;
        }
      }
      if (!has_parent) ++star;
    }

    const BallResult big = ball(region, region.base, R / 10);
    const BallResult small = ball(region, region.base, inner_r);
    const double degree_bound = static_cast<double>(big.inside.count()) /
                                static_cast<double>(small.inside.count());

    csv += std::to_string(R) + "," + std::to_string(cg.center_count()) + "," +
           std::to_string(cg.max_degree) + "," + format_number(degree_bound) + "," +
           std::to_string(sandwich) + "," + std::to_string(star) + ",";
    if (region.radius >= 2 * R) {
      const double ratio = coarse_contraction_bound(cg, pairs, seed);
      csv += format_number(ratio) + "," + std::to_string(R);
    } else {
      csv += ",";
    }
    csv += "\n";
    if (sandwich || star || cg.max_degree > degree_bound) all_clean = false;
    os << " R=" << R << " net=" << cg.center_count() << " sandwich=" << sandwich
       << " star=" << star << " degree=" << cg.max_degree << "/"
       << format_number(degree_bound) << ";";
  }
  ctx.emit("coarse_check.csv", csv);
  ctx.manifest_extra["all_clean"] = all_clean;
  os << (all_clean ? " all checks clean" : " VIOLATIONS FOUND");
  ctx.result.summary = os.str();
}

void run_surgery_demo(OptReader& r, const FiniteRegion& region, RunContext& ctx) {
  const int delta = static_cast<int>(r.integer("delta", 2));
  require_l(region.radius, 8, "the demo layout needs room for the detour");
  const GraphView& g = region.g;

  auto at = [&](int a, int b) {
    std::vector<std::int32_t> c(static_cast<std::size_t>(region.dim), 0);
    c[0] = a;
    c[1] = b;
    const auto v = region.vertex_at(c);
    if (!v) throw geometry_error("demo vertex missing from the region");
    return *v;
  };
  const int reach = std::min(5, region.radius - 3);
  const VertexId x = at(-reach, 0);
  const VertexId y = at(reach, 0);

  VertexSet forbidden(g.n);
  std::vector<VertexId> f_list;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      const VertexId v = at(a, b);
      forbidden.set(v);
      f_list.push_back(v);
    }
  std::sort(f_list.begin(), f_list.end());

  std::vector<VertexId> beta_walk;
  for (int a = -reach; a <= reach; ++a) beta_walk.push_back(at(a, 0));
  std::vector<VertexId> gamma_walk;
  for (int b = 0; b <= 3; ++b) gamma_walk.push_back(at(-reach, b));
  for (int a = -reach + 1; a <= reach; ++a) gamma_walk.push_back(at(a, 3));
  for (int b = 2; b >= 0; --b) gamma_walk.push_back(at(reach, b));

  const Chain1 beta = path_chain(g, beta_walk);
  const Chain1 gamma = path_chain(g, gamma_walk);

  VertexSet window(g.n);
  window.set();
  CycleBasisDelta basis = small_cycle_generators(g, delta, window);

  RerouteTrace trace;
  const Chain1 rerouted = reroute_path(g, beta, gamma, forbidden, delta, basis, &trace);
  const std::vector<VertexId> result_path = chain_to_path(g, rerouted, x, y);

  // containment: inside (N(F, delta) u support(beta)) \ F
  VertexSet allowed(g.n);
  {
    BfsScratch s;
    BfsOptions opt;
    opt.max_depth = delta;
    bfs_multi(g, f_list, s, opt);
    for (const VertexId w : s.queue) allowed.set(w);
  }
  for (const VertexId w : chain_support(g, beta)) allowed.set(w);
  bool contained = true;
  for (const VertexId w : result_path) {
    if (forbidden.test(w) || !allowed.test(w)) contained = false;
  }
  if (!contained) throw invariant_violation("rerouted path left its certified support");

  auto path_line = [&](const char* name, const std::vector<VertexId>& path) {
    std::string line = name;
    line += ":";
    for (const VertexId v : path) {
      line += " ";
      line += coord_str(region, v);
    }
    return line + "\n";
  };
  std::string txt;
  txt += "x: " + coord_str(region, x) + "\n";
  txt += "y: " + coord_str(region, y) + "\n";
  txt += path_line("forbidden", f_list);
  txt += path_line("beta", beta_walk);
  txt += path_line("gamma", gamma_walk);
  txt += "basis_rank: " + std::to_string(basis.rank()) + "\n";
  txt += "selection: " + std::to_string(trace.selection.size()) + " generators\n";
  txt += "gamma2_edges: " + std::to_string(trace.gamma2.size()) + "\n";
  txt += path_line("result", result_path);
  txt += "containment: ok\n";
  ctx.emit("surgery_demo.txt", txt);
  ctx.manifest_extra["result_edges"] = rerouted.size();
  std::ostringstream os;
  os << "surgery-demo: rerouted " << beta.size() << "-edge path around a " << f_list.size()
     << "-vertex obstacle into " << rerouted.size() << " edges using "
     << trace.selection.size() << " of " << basis.rank() << " generators";
  ctx.result.summary = os.str();
}

struct RussoHost {
  const char* name;
  GraphView g;
  VertexId far_a = 0, far_b = 0;
};

void run_russo(OptReader& r, RunContext& ctx) {
  const auto p_grid = span_grid_real(r.real("p-lo", 0.1), r.real("p-hi", 0.9),
                                     r.real("p-step", 0.2), "p");
  const double cap = r.real("cap", 8);
  const std::uint64_t seed = r.uint("seed", 0x72757373);

  std::vector<RussoHost> hosts;
  hosts.push_back({"edge", GraphView::from_edges(2, {{0, 1}}), 0, 1});
  hosts.push_back({"path", GraphView::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}), 0, 4});
  hosts.push_back(
      {"square", GraphView::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), 0, 3});

  struct Obs {
    const char* name;
    Observable f;
  };
  EstimateTable table;
  table.param_names = {"host", "obs", "p"};
  table.metadata.emplace_back("hosts", "0=edge 1=path 2=square");
  table.metadata.emplace_back("observables",
                              "0=closed-indicator 1=constant 2=capped-distance 3=components");
  double worst = 0;
  std::ostringstream os;
  for (std::size_t hi = 0; hi < hosts.size(); ++hi) {
    const RussoHost& host = hosts[hi];
    const GraphView& hg = host.g;
    std::vector<Obs> obs;
    obs.push_back({"closed-indicator",
                   [](const EdgeSet& open) { return open.test(0) ? 0.0 : 1.0; }});
    obs.push_back({"constant", [](const EdgeSet&) { return 1.0; }});
    obs.push_back({"capped-distance", [&hg, &host, cap](const EdgeSet& open) {
                     BfsScratch s;
                     BfsOptions opt;
                     opt.open = &open;
                     opt.target = host.far_b;
                     const int d = bfs_run(hg, host.far_a, s, opt);
                     return d < 0 ? cap : std::min(static_cast<double>(d), cap);
                   }});
    obs.push_back({"components", [&hg](const EdgeSet& open) {
                     BfsScratch s;
                     BfsOptions opt;
                     opt.open = &open;
                     double count = 0;
                     std::vector<std::uint8_t> done(hg.n, 0);
                     for (VertexId v = 0; v < hg.n; ++v) {
                       if (done[v]) continue;
                       ++count;
                       bfs_run(hg, v, s, opt);
                       for (const VertexId w : s.queue) done[w] = 1;
                     }
                     return count;
                   }});
    for (std::size_t oi = 0; oi < obs.size(); ++oi) {
      const RussoReport rep = russo_check(hg, obs[oi].f, p_grid, substream(seed, hi * 8 + oi));
      worst = std::max(worst, rep.max_abs_diff);
      for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        EstimateTable::Row row;
        row.params = {static_cast<double>(hi), static_cast<double>(oi), p_grid[pi]};
        row.estimate = std::abs(rep.lhs[pi] - rep.rhs[pi]);
        row.se = 0;
        row.n = 1;
        table.rows.push_back(row);
      }
    }
  }
  ctx.emit("russo.csv", table);
  ctx.manifest_extra["max_abs_diff"] = worst;
  os << "russo: " << table.rows.size() << " host/observable/p checks, max |lhs - rhs| = "
     << format_number(worst);
  ctx.result.summary = os.str();
}

void run_goodapprox(OptReader& r, const FiniteRegion& region, unsigned workers,
                    RunContext& ctx) {
  const double p = r.real("p", 0.7);
  const double c_exp = r.real("C", 5.0);
  const std::vector<int> dists = int_list(r.str("dists", "20,40"), "dists");
  int max_d = 0;
  for (const int d : dists) max_d = std::max(max_d, d);
  require_l(region.radius, (3 * max_d + 1) / 2, "pair endpoints need interior margin");
  McRun run;
  run.seed = r.uint("seed", 1);
  run.index_lo = r.uint("index-lo", 0);
  run.n = r.uint("n", 1000);
  run.workers = workers;

  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (const int d : dists) pairs.push_back(axis_pair(region, d));
  const EstimateTable table = goodapprox_check(region, p, pairs, c_exp, run);
  ctx.emit("goodapprox.csv", table);

  const auto n_grid = span_grid(static_cast<int>(r.integer("ring-lo", 1)),
                                static_cast<int>(r.integer("ring-hi", 20)),
                                static_cast<int>(r.integer("ring-step", 1)), "ring");
  const EstimateTable ring = ring_distance_tail(region, p, region.base, n_grid, run);
  ctx.emit("ring_tail.csv", ring);

  std::ostringstream os;
  os << "goodapprox: normalized |distance gap| per pair distance:";
  for (const auto& row : table.rows)
    os << " d=" << format_number(row.params[0]) << " -> " << format_number(row.estimate);
  ctx.result.summary = os.str();
}

void run_animal(OptReader& r, const FiniteRegion& region, RunContext& ctx) {
  const int len = static_cast<int>(r.integer("len", 8));
  const int N = static_cast<int>(r.integer("N", 1));
  const std::uint64_t seed = r.uint("seed", 1);
  const std::uint64_t trials = r.uint("trials", 200);
  if (trials == 0) throw config_error("trials must be positive");
  const std::vector<int> q_perc = int_list(r.str("q-percents", "25,50,75"), "q-percents");

  EstimateTable table;
  table.param_names = {"q"};
  table.metadata.emplace_back("family", family_name(region.family));
  table.metadata.emplace_back("L", std::to_string(region.radius));
  table.metadata.emplace_back("len", std::to_string(len));
  const std::uint32_t m = region.edge_count();
  std::vector<std::uint8_t> indicator(m);
  std::vector<double> values(trials);
  for (const int qp : q_perc) {
    if (qp < 0 || qp > 100) throw config_error("q percentages must lie in [0, 100]");
    const double q = qp / 100.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const std::uint64_t stream = substream(seed, t);
      for (EdgeId e = 0; e < m; ++e) indicator[e] = uniform01(stream, e) < q ? 1 : 0;
      values[t] = greedy_animal(region, indicator, len);
    }
    const MeanSe ms = mean_se(values);
    EstimateTable::Row row;
    row.params = {q};
    row.estimate = ms.mean;
    row.se = ms.se;
    row.n = trials;
    row.seed_lo = 0;
    row.seed_hi = trials - 1;
    table.rows.push_back(row);
  }
  ctx.emit("animal.csv", table);

  const ColoringResult col = coloring_bound(region, N);
  std::string csv = "N,colors,bound,degenerate\n";
  csv += std::to_string(col.N) + "," + std::to_string(col.colors) + "," +
         std::to_string(col.bound) + "," + (col.degenerate ? "1" : "0") + "\n";
  ctx.emit("coloring.csv", csv);
  ctx.manifest_extra["colors"] = col.colors;
  ctx.manifest_extra["color_bound"] = col.bound;
  std::ostringstream os;
  os << "animal: max path weight over " << trials << " indicator draws per density; "
     << "edge coloring with separation " << 2 * N << " used " << col.colors
     << " colors (bound " << col.bound << (col.degenerate ? ", degenerate case" : "") << ")";
  ctx.result.summary = os.str();
}

void run_export_graph(const FiniteRegion& region, RunContext& ctx) {
  std::ostringstream os;
  export_region(region, os);
  ctx.emit("graph.txt", os.str());
  ctx.result.summary = "export-graph: " + std::to_string(region.g.n) + " vertices, " +
                       std::to_string(region.edge_count()) + " edges";
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "tail",    "timeconst",    "lipschitz",  "coarse-check", "surgery-demo",
      "russo",   "goodapprox",   "animal",     "export-graph"};
  return kinds;
}

RunResult run_experiment(const ExperimentSpec& spec) {
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
    throw config_error("unknown experiment kind '" + spec.kind + "'");

  std::map<std::string, std::string> options = spec.options;
  OptReader reader{&options, {}};
  RunContext ctx;
  const unsigned workers = spec.workers ? spec.workers : 1;

  std::optional<FiniteRegion> region;
  if (spec.kind != "russo") region.emplace(build_region(reader));

  if (spec.kind == "tail")
    run_tail(reader, *region, workers, ctx);
  else if (spec.kind == "timeconst")
    run_timeconst(reader, *region, workers, ctx);
  else if (spec.kind == "lipschitz")
    run_lipschitz(reader, *region, workers, ctx);
  else if (spec.kind == "coarse-check")
    run_coarse_check(reader, *region, ctx);
  else if (spec.kind == "surgery-demo")
    run_surgery_demo(reader, *region, ctx);
  else if (spec.kind == "russo")
    run_russo(reader, ctx);
  else if (spec.kind == "goodapprox")
    run_goodapprox(reader, *region, workers, ctx);
  else if (spec.kind == "animal")
    run_animal(reader, *region, ctx);
  else
    run_export_graph(*region, ctx);
  reader.reject_unknown(spec.kind);

  // content-addressed directory from the effective (defaults included) config
  std::string canonical = spec.kind + "\n";
  for (const auto& [key, value] : options) canonical += key + "=" + value + "\n";
  const std::filesystem::path dir =
      std::filesystem::path(spec.out_base) / (spec.kind + "-" + hex16(fnv1a64(canonical)));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw resource_error("cannot create output directory " + dir.string());
  for (const auto& [name, content] : ctx.pending) write_text(dir / name, content);

  nlohmann::json manifest;
  manifest["kind"] = spec.kind;
  manifest["version"] = kVersion;
  manifest["workers"] = workers;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [key, value] : options) cfg[key] = value;
  manifest["config"] = cfg;
  manifest["outputs"] = ctx.result.files;
  manifest["results"] = ctx.manifest_extra;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  ctx.result.files.push_back("manifest.json");
  ctx.result.out_dir = dir.string();
  return ctx.result;
}

std::map<std::string, std::string> load_config(const std::string& path,
                                               const std::string& kind) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot read config file " + path);
  std::map<std::string, std::string> global, section;
  std::string line;
  std::string current;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
  };
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config parse error (line " + std::to_string(lineno) +
                         "): expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw config_error("config parse error (line " + std::to_string(lineno) +
                         "): empty key");
    if (current.empty())
      global[key] = value;
    else if (current == kind)
      section[key] = value;
  }
  for (const auto& [k, v] : section) global[k] = v;
  return global;
}

}  // namespace percchem
