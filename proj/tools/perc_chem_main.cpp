#include <iostream>
#include <list>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "percchem/errors.hpp"
#include "percchem/parallel.hpp"
#include "percchem/runner.hpp"

namespace {

// Flag names per experiment kind; every value parses in the runner, the CLI
// only ferries strings, so config-file entries and flags share one code path.
const std::map<std::string, std::vector<std::string>>& kind_flags() {
  static const std::map<std::string, std::vector<std::string>> flags = {
      {"tail",
       {"family", "dim", "L", "p", "K", "dist", "t-lo", "t-hi", "t-step", "n", "seed",
        "index-lo"}},
      {"timeconst",
       {"family", "dim", "L", "p", "n-lo", "n-hi", "n-step", "samples", "seed", "index-lo"}},
      {"lipschitz",
       {"family", "dim", "L", "dist", "p-lo", "p-hi", "p-step", "n", "seed", "index-lo"}},
      {"coarse-check", {"family", "dim", "L", "R-lo", "R-hi", "R-step", "pairs", "seed"}},
      {"surgery-demo", {"family", "dim", "L", "delta"}},
      {"russo", {"p-lo", "p-hi", "p-step", "cap", "seed"}},
      {"goodapprox",
       {"family", "dim", "L", "p", "C", "dists", "n", "seed", "index-lo", "ring-lo",
        "ring-hi", "ring-step"}},
      {"animal", {"family", "dim", "L", "len", "N", "seed", "trials", "q-percents"}},
      {"export-graph", {"family", "dim", "L"}},
  };
  return flags;
}

const char* kind_blurb(const std::string& kind) {
  if (kind == "tail") return "exceedance frequencies of the open-path distance";
  if (kind == "timeconst") return "directional speed of the open metric";
  if (kind == "lipschitz") return "coupled sweep of the normalized open distance over p";
  if (kind == "coarse-check") return "deterministic tile/net/degree checks per scale";
  if (kind == "surgery-demo") return "worked path-surgery instance with a full trace";
  if (kind == "russo") return "exact derivative identity on tiny hosts";
  if (kind == "goodapprox") return "penalized vs ring-to-ring distance gap";
  if (kind == "animal") return "max path weight search and edge-separation coloring";
  return "write the region graph as text";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace percchem;

  CLI::App app{"percolation chemical-distance experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_base = "runs";
  unsigned workers = default_workers();
  app.add_option("--config", config_path, "key = value config file with [kind] sections");
  app.add_option("--out", out_base, "output root directory (default runs)");
  app.add_option("--workers", workers, "worker threads; outputs are identical for any value");

  struct Sub {
    std::string kind;
    CLI::App* cmd = nullptr;
    std::map<std::string, std::string> values;
  };
  std::list<Sub> subs;
  for (const auto& [kind, flags] : kind_flags()) {
    Sub& sub = subs.emplace_back();
    sub.kind = kind;
    sub.cmd = app.add_subcommand(kind, kind_blurb(kind));
    for (const std::string& flag : flags)
      sub.cmd->add_option("--" + flag, sub.values[flag]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const Sub& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      ExperimentSpec spec;
      spec.kind = sub.kind;
      spec.out_base = out_base;
      spec.workers = workers;
      if (!config_path.empty()) spec.options = load_config(config_path, sub.kind);
      for (const auto& [flag, value] : sub.values) {
        if (sub.cmd->get_option("--" + flag)->count() > 0) spec.options[flag] = value;
      }
      const RunResult result = run_experiment(spec);
      std::cout << result.summary << "\n";
      std::cout << "wrote " << result.out_dir << ":";
      for (const std::string& file : result.files) std::cout << " " << file;
      std::cout << "\n";
    }
    return 0;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
