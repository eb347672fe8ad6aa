#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flicker/greens.hpp"
#include "flicker/model.hpp"
#include "flicker/wigner.hpp"

namespace flicker::cli {

// Every knob of a run. Temperature is theta unless temperature_kelvin is set,
// in which case theta = kB T / (hbar omega0_rad_per_s).
struct RunConfig {
  double eta = 1e-3;
  double x = 0.5;
  double cutoff_ratio = 1.0;  // omega_c / omega0
  double theta = 0.654;
  std::optional<double> temperature_kelvin;
  double omega0_rad_per_s = 5e9;

  double dt = 0.0;  // 0 selects default_dt
  double horizon = 20.0;

  double omega_min = 1e-4;
  double omega_max = 1e-2;
  int omega_points = 41;

  int grid_points = 256;
  double extent = 5.0;
  bool auto_extent = true;
  int state_n = 0;
  int state_m = 3;
  std::vector<double> snapshot_times{0.0, 1.0, 1.5, 2.0};

  Tolerances tolerances;

  double effective_theta() const;
  ReservoirModel model() const;
  TimeGrid grid() const;
  SuperpositionState state() const;
  WignerGridSpec wigner_grid() const;
  void validate() const;

  nlohmann::json to_json() const;
  // Unknown keys are rejected. A metadata sidecar (object with a "config" key) is accepted as well.
  static RunConfig from_json(const nlohmann::json& j);
};

RunConfig load_config(const std::string& path);

// Worker count from FLICKER_WORKERS; hardware concurrency when unset, at least 1.
int worker_count();

}  // namespace flicker::cli
