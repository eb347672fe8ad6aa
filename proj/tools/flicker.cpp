#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flicker/cli/runner.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<double> dt, horizon, eta, x, theta, tolerance;
  std::optional<int> grid;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (a metadata sidecar also works)");
  cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--dt", o.dt, "time step in 1/omega0 (0 selects the default)");
  cmd->add_option("--horizon", o.horizon, "time horizon in 1/omega0");
  cmd->add_option("--eta", o.eta, "coupling strength");
  cmd->add_option("--x", o.x, "noise exponent x = 1 - s");
  cmd->add_option("--theta", o.theta, "temperature kB T / (hbar omega0)");
  cmd->add_option("--grid", o.grid, "Wigner grid points per axis");
  cmd->add_option("--tolerance", o.tolerance, "relative quadrature tolerance");
}

flicker::cli::RunConfig resolve(const Overrides& o) {
  auto c = o.config_path.empty() ? flicker::cli::RunConfig{} : flicker::cli::load_config(o.config_path);
  if (o.dt) c.dt = *o.dt;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.eta) c.eta = *o.eta;
  if (o.x) c.x = *o.x;
  if (o.theta) {
    c.theta = *o.theta;
    c.temperature_kelvin.reset();
  }
  if (o.grid) c.grid_points = *o.grid;
  if (o.tolerance) c.tolerances.rel = *o.tolerance;
  c.validate();
  return c;
}

void report(const std::vector<std::filesystem::path>& written) {
  for (const auto& p : written) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact resonator dynamics under 1/f^x reservoir noise"};
  app.require_subcommand(1);
  Overrides o;
  std::string preset;

  std::vector<std::pair<std::string, CLI::App*>> verb_cmds;
  for (const auto& verb : flicker::cli::verbs()) {
    auto* cmd = app.add_subcommand(verb, "compute " + verb + " for the configured model");
    add_common(cmd, o);
    verb_cmds.emplace_back(verb, cmd);
  }
  auto* preset_cmd = app.add_subcommand("preset", "emit the data behind a figure");
  preset_cmd->add_option("id", preset, "fig1a, fig1b, fig2, fig3, fig4-temps or fig5-wigner")->required();
  add_common(preset_cmd, o);
  auto* compare_cmd = app.add_subcommand("compare", "run the oracle suite and write compare_report.json");
  add_common(compare_cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = resolve(o);
    for (const auto& [verb, cmd] : verb_cmds)
      if (cmd->parsed()) report(flicker::cli::run_verb(verb, config).write(o.out_dir));
    if (preset_cmd->parsed()) {
      report(flicker::cli::run_preset(preset, config, flicker::cli::worker_count()).write(o.out_dir));
    }
    if (compare_cmd->parsed()) {
      const auto result = flicker::cli::run_compare(config, flicker::cli::worker_count());
      flicker::cli::ArtifactSet files;
      files.add_json("compare_report.json", result.to_json());
      report(files.write(o.out_dir));
      for (const auto& c : result.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " max_error=" << c.max_error << " tolerance=" << c.tolerance
                  << "\n";
      return result.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
    }
  } catch (const std::exception& e) {
    std::cerr << "flicker: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
