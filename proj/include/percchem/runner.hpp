#pragma once

#include <map>
#include <string>
#include <vector>

namespace percchem {

// One experiment, fully described by a flat key-value option map.  The map is
// the merge of config-file entries and command-line flags (flags win); the
// output directory is content-addressed from (kind, options) minus the keys
// that cannot change results (workers), so identical configs land in the
// same directory and reruns rewrite identical bytes.
struct ExperimentSpec {
  std::string kind;
  std::map<std::string, std::string> options;
  std::string out_base = "runs";
  unsigned workers = 1;
};

struct RunResult {
  std::string out_dir;
  std::vector<std::string> files;  // file names inside out_dir, manifest last
  std::string summary;             // one-paragraph stdout report
};

const std::vector<std::string>& experiment_kinds();

RunResult run_experiment(const ExperimentSpec& spec);

// Flat "key = value" config format, one section per experiment kind:
// "[tail]" lines apply to tail runs.  Returns the section for `kind` merged
// under any leading unsectioned lines.
std::map<std::string, std::string> load_config(const std::string& path,
                                               const std::string& kind);

}  // namespace percchem
