#include "flicker/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

namespace flicker::cli {

using nlohmann::json;

double RunConfig::effective_theta() const {
  return temperature_kelvin ? theta_from_kelvin(*temperature_kelvin, omega0_rad_per_s) : theta;
}

ReservoirModel RunConfig::model() const { return ReservoirModel::from_x(eta, x, cutoff_ratio, 1.0, effective_theta()); }

TimeGrid RunConfig::grid() const {
  const double step = dt > 0.0 ? dt : default_dt(model());
  return TimeGrid::covering(horizon, step);
}

SuperpositionState RunConfig::state() const { return {state_n, state_m}; }

WignerGridSpec RunConfig::wigner_grid() const { return {grid_points, extent, auto_extent}; }

void RunConfig::validate() const {
  model().validate();
  if (!(x > 0.0) || !(x < 1.0)) throw DomainError("config: x must lie in (0, 1)");
  if (temperature_kelvin && (!(*temperature_kelvin >= 0.0) || !(omega0_rad_per_s > 0.0)))
    throw DomainError("config: temperature_kelvin must be >= 0 and omega0_rad_per_s > 0");
  if (!(dt >= 0.0)) throw DomainError("config: dt must be >= 0");
  if (!(horizon > 0.0)) throw DomainError("config: horizon must be > 0");
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) throw DomainError("config: need 0 < omega_min < omega_max");
  if (omega_points < 2) throw DomainError("config: omega_points must be >= 2");
  if (grid_points < 2) throw DomainError("config: grid_points must be >= 2");
  if (!(extent > 0.0)) throw DomainError("config: extent must be > 0");
  state().validate();
  for (double t : snapshot_times)
    if (!(t >= 0.0)) throw DomainError("config: snapshot times must be >= 0");
  if (!(tolerances.abs > 0.0) || !(tolerances.rel > 0.0)) throw DomainError("config: tolerances must be > 0");
  grid().validate();
}

json RunConfig::to_json() const {
  json j;
  j["eta"] = eta;
  j["x"] = x;
  j["cutoff_ratio"] = cutoff_ratio;
  j["theta"] = theta;
  j["temperature_kelvin"] = temperature_kelvin ? json(*temperature_kelvin) : json(nullptr);
  j["omega0_rad_per_s"] = omega0_rad_per_s;
  j["dt"] = dt;
  j["horizon"] = horizon;
  j["omega_min"] = omega_min;
  j["omega_max"] = omega_max;
  j["omega_points"] = omega_points;
  j["grid_points"] = grid_points;
  j["extent"] = extent;
  j["auto_extent"] = auto_extent;
  j["state"] = {state_n, state_m};
  j["snapshot_times"] = snapshot_times;
  j["tolerance_abs"] = tolerances.abs;
  j["tolerance_rel"] = tolerances.rel;
  return j;
}

RunConfig RunConfig::from_json(const json& input) {
  const json& j = (input.is_object() && input.contains("config")) ? input.at("config") : input;
  if (!j.is_object()) throw DomainError("config: expected a JSON object");
  static const std::set<std::string> known{"eta",       "x",           "cutoff_ratio", "theta",       "temperature_kelvin",
                                           "omega0_rad_per_s", "dt",    "horizon",      "omega_min",   "omega_max",
                                           "omega_points", "grid_points", "extent",     "auto_extent", "state",
                                           "snapshot_times", "tolerance_abs", "tolerance_rel"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw DomainError("config: unknown key '" + key + "'");
  RunConfig c;
  try {
    auto read = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    read("eta", c.eta);
    read("x", c.x);
    read("cutoff_ratio", c.cutoff_ratio);
    read("theta", c.theta);
    if (j.contains("temperature_kelvin") && !j.at("temperature_kelvin").is_null())
      c.temperature_kelvin = j.at("temperature_kelvin").get<double>();
    read("omega0_rad_per_s", c.omega0_rad_per_s);
    read("dt", c.dt);
    read("horizon", c.horizon);
    read("omega_min", c.omega_min);
    read("omega_max", c.omega_max);
    read("omega_points", c.omega_points);
    read("grid_points", c.grid_points);
    read("extent", c.extent);
    read("auto_extent", c.auto_extent);
    if (j.contains("state")) {
      const auto s = j.at("state").get<std::vector<int>>();
      if (s.size() != 2) throw DomainError("config: state must be [n, m]");
      c.state_n = s[0];
      c.state_m = s[1];
    }
    read("snapshot_times", c.snapshot_times);
    read("tolerance_abs", c.tolerances.abs);
    read("tolerance_rel", c.tolerances.rel);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("config: " + path + ": " + e.what());
  }
  return RunConfig::from_json(j);
}

int worker_count() {
  if (const char* env = std::getenv("FLICKER_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw DomainError("FLICKER_WORKERS must be a positive integer");
    return static_cast<int>(n);
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace flicker::cli
