#pragma once

#include <stdexcept>
#include <string>

namespace percchem {

// Error taxonomy. The CLI maps these onto process exit codes:
//   config/parameter/precondition -> 2, geometry/margin -> 3,
//   invariant or certification failure -> 4, resource -> 5.

struct config_error : std::runtime_error {
  explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& m) : std::runtime_error(m) {}
};

struct geometry_error : std::runtime_error {
  explicit geometry_error(const std::string& m) : std::runtime_error(m) {}
};

// A construction step failed even though its preconditions were satisfied.
// This should never happen; when it does we want a loud, typed failure.
struct invariant_violation : std::runtime_error {
  explicit invariant_violation(const std::string& m) : std::runtime_error(m) {}
};

// A cycle could not be expressed over the small-cycle basis in play.
struct certification_error : std::runtime_error {
  explicit certification_error(const std::string& m) : std::runtime_error(m) {}
};

struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& m) : std::runtime_error(m) {}
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const resource_error*>(&e)) return 5;
  if (dynamic_cast<const invariant_violation*>(&e)) return 4;
  if (dynamic_cast<const certification_error*>(&e)) return 4;
  if (dynamic_cast<const geometry_error*>(&e)) return 3;
  return 2;
}

}  // namespace percchem
