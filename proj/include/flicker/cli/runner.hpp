#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flicker/cli/config.hpp"
#include "flicker/cli/output.hpp"

namespace flicker::cli {

const std::vector<std::string>& verbs();
const std::vector<std::string>& preset_ids();

// Single computation on the configured model. Throws DomainError for an unknown verb.
ArtifactSet run_verb(const std::string& verb, const RunConfig& config);

// Figure data sets; independent series are spread over `workers` threads and
// collected in a fixed order. Throws DomainError for an unknown id.
ArtifactSet run_preset(const std::string& id, const RunConfig& config, int workers);

struct CompareCheck {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CompareReport {
  std::vector<CompareCheck> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

// Oracle suite: bath convergence, brute-force v spot checks, Wigner path
// independence and the zero-temperature branch.
CompareReport run_compare(const RunConfig& config, int workers);

// Applies fn(i) for i in [0, n) on up to `workers` threads; the first exception is rethrown.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace flicker::cli
