#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "flicker/wigner.hpp"

namespace flicker::cli {

// %.17g: round-trips doubles and is stable across runs.
std::string format_number(double value);

struct Artifact {
  std::string name;
  std::string content;
};

// Files held in memory until the whole run has succeeded, so a failed run
// leaves nothing behind. Each data file gets a <stem>.meta.json sidecar.
class ArtifactSet {
 public:
  void add_series(const std::string& stem, const std::vector<std::string>& header,
                  const std::vector<Eigen::VectorXd>& columns, nlohmann::json meta);
  // Long format x,y,W.
  void add_field(const std::string& stem, const WignerField& field, nlohmann::json meta);
  void add_json(const std::string& name, const nlohmann::json& value);
  void append(ArtifactSet other);

  const std::vector<Artifact>& files() const noexcept { return files_; }
  // Writes in insertion order; returns the written paths.
  std::vector<std::filesystem::path> write(const std::filesystem::path& dir) const;

 private:
  std::vector<Artifact> files_;
};

}  // namespace flicker::cli
