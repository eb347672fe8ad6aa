#include "flicker/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "flicker/noise.hpp"
#include "flicker/oracle.hpp"
#include "flicker/spectral.hpp"

namespace flicker::cli {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

json metadata(const RunConfig& config, const std::string& task) {
  const auto model = config.model();
  const auto grid = config.grid();
  json meta;
  meta["generator"] = "flicker";
  meta["task"] = task;
  meta["reproduce"] = "flicker " + task + " --config <this file>";
  meta["config"] = config.to_json();
  meta["derived"] = {{"theta", model.theta}, {"s", model.s},          {"omega_c", model.omega_c},
                     {"omega0", model.omega0}, {"dt", grid.dt},       {"n_steps", grid.n_steps}};
  meta["units"] = {{"time", "1/omega0"},
                   {"frequency", "omega0"},
                   {"temperature", "theta = kB T / (hbar omega0)"},
                   {"omega0_rad_per_s", "omega0 read as an angular frequency when converting kelvin"}};
  meta["constants"] = {{"kB_J_per_K", kBoltzmann}, {"hbar_J_s", kHbar}};
  return meta;
}

Eigen::VectorXd times_of(const TimeGrid& grid) {
  return Eigen::VectorXd::LinSpaced(grid.size(), grid.t0, grid.time(grid.n_steps));
}

Eigen::VectorXd log_space(double lo, double hi, int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return w;
}

std::string tag(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  std::string s = buffer;
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '-', 'm');
  return s;
}

ArtifactSet kernels(const RunConfig& c, const std::string& stem) {
  const auto model = c.model();
  const auto grid = c.grid();
  const auto g = tabulate_g(model, grid.dt, grid.size());
  const auto gt = tabulate_g_tilde(model, grid.dt, grid.size());
  ArtifactSet out;
  out.add_series(stem, {"t", "g_re", "g_im", "g_tilde_re", "g_tilde_im"},
                 {times_of(grid), g.real(), g.imag(), gt.real(), gt.imag()}, metadata(c, "kernels"));
  return out;
}

ArtifactSet propagator(const RunConfig& c, const std::string& stem) {
  const auto solution = solve_greens(c.model(), c.grid());
  if (solution.unstable) throw SolverError("propagator: |u| exceeded 1 beyond solver tolerance");
  auto meta = metadata(c, "propagator");
  meta["max_u_error_estimate"] = solution.u_error.maxCoeff();
  ArtifactSet out;
  out.add_series(stem, {"t", "u_re", "u_im", "u_abs", "u_error", "v"},
                 {times_of(solution.grid), solution.u.real(), solution.u.imag(), solution.u.cwiseAbs(), solution.u_error,
                  solution.v},
                 meta);
  return out;
}

ArtifactSet coefficients(const RunConfig& c, const std::string& stem) {
  const auto solution = solve_greens(c.model(), c.grid());
  const auto coeffs = master_coefficients(solution.u, solution.v, solution.grid);
  ArtifactSet out;
  out.add_series(stem, {"t", "omega0_prime", "gamma", "gamma_tilde", "v"},
                 {times_of(solution.grid), coeffs.omega0_prime, coeffs.gamma, coeffs.gamma_tilde, solution.v},
                 metadata(c, "coefficients"));
  return out;
}

// v(t, t + tau) at t = horizon with tau up to horizon, and its one-sided transform
// against the sampled S2 on [0.1, 3].
ArtifactSet correlation(const RunConfig& c, const std::string& stem) {
  const auto model = c.model();
  const auto half = c.grid();
  const TimeGrid grid{0.0, half.dt, 2 * half.n_steps};
  const auto u = solve_u_volterra(model, grid).u;
  const auto vt = compute_v_two_time(model, u, grid, half.n_steps, half.n_steps);
  const Eigen::VectorXd tau = Eigen::VectorXd::LinSpaced(vt.size(), 0.0, half.horizon());
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(59, 0.1, 3.0);
  const auto numeric = one_sided_fourier(vt, grid.dt, w);
  const auto exact = spectrum_series(model, w).s2_values;
  auto meta = metadata(c, "correlation");
  meta["t"] = half.horizon();
  ArtifactSet out;
  out.add_series(stem, {"tau", "v_re", "v_im"}, {tau, vt.real(), vt.imag()}, meta);
  meta["omega_range"] = {0.1, 3.0};
  out.add_series(stem + "_spectrum", {"omega", "s2_fourier", "s2_exact"}, {w, numeric, exact}, meta);
  return out;
}

ArtifactSet noise(const RunConfig& c, const std::string& stem, double fit_min, double fit_max) {
  const auto model = c.model();
  const auto w = log_space(c.omega_min, c.omega_max, c.omega_points);
  const auto series = spectrum_series(model, w);
  Eigen::VectorXd low(w.size()), corr(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    low[i] = s_low_freq(model, w[i]);
    corr[i] = correction_term(model, w[i]);
  }
  auto meta = metadata(c, "noise");
  const auto fit = fit_power_law(series, std::max(fit_min, c.omega_min), std::min(fit_max, c.omega_max));
  meta["fit"] = {{"exponent", fit.exponent}, {"prefactor", fit.prefactor}, {"r_squared", fit.r_squared},
                 {"omega_min", fit.omega_min}, {"omega_max", fit.omega_max}, {"samples", fit.samples}};
  meta["delta_peak"] = {{"weight", series.delta_weight}, {"location", series.delta_location}};
  ArtifactSet out;
  out.add_series(stem, {"omega", "s", "s1", "s2", "s_low_freq", "correction"},
                 {w, series.values, series.s1_values, series.s2_values, low, corr}, meta);
  return out;
}

ArtifactSet wigner(const RunConfig& c, const std::string& stem) {
  const auto state = c.state();
  const double last = *std::max_element(c.snapshot_times.begin(), c.snapshot_times.end());
  RunConfig solved = c;
  solved.horizon = std::max(last, c.grid().dt);
  const auto solution = solve_greens(c.model(), solved.grid());
  const auto fields = snapshot_series(state, solution, c.snapshot_times, c.wigner_grid());
  ArtifactSet out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    auto meta = metadata(c, "wigner");
    const auto [u, v] = interpolate_uv(solution, fields[i].time);
    meta["u"] = {u.real(), u.imag()};
    meta["v"] = v;
    out.add_field(stem + "_t" + tag(fields[i].time), fields[i], meta);
  }
  return out;
}

ArtifactSet dispatch(const std::string& verb, const RunConfig& c, const std::string& stem) {
  if (verb == "kernels") return kernels(c, stem);
  if (verb == "propagator") return propagator(c, stem);
  if (verb == "correlation") return correlation(c, stem);
  if (verb == "coefficients") return coefficients(c, stem);
  if (verb == "noise") return noise(c, stem, 1e-4, 1e-2);
  if (verb == "wigner") return wigner(c, stem);
  throw DomainError("unknown verb '" + verb + "'");
}

ArtifactSet run_tasks(std::vector<std::function<ArtifactSet()>> tasks, int workers) {
  std::vector<ArtifactSet> results(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), workers, [&](int i) { results[i] = tasks[i](); });
  ArtifactSet out;
  for (auto& r : results) out.append(std::move(r));
  return out;
}

const std::vector<double> kXs{0.25, 0.5, 0.75, 0.9999};

RunConfig one_ghz(RunConfig c, double kelvin) {
  c.temperature_kelvin = kelvin;
  c.omega0_rad_per_s = 1e9;
  return c;
}

ArtifactSet preset_fig1a(const RunConfig& base) {
  RunConfig c = base;
  c.eta = 1e-3;
  c.x = 0.5;
  c.theta = 0.654;
  const auto etas = log_space(1e-5, 1.0, 21);
  const auto omegas = log_space(1e-5, 1.0, 21);
  const auto map = validity_map(c.model(), etas, omegas);
  Eigen::VectorXd e(map.size()), w(map.size()), m(map.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < etas.size(); ++i)
    for (Eigen::Index j = 0; j < omegas.size(); ++j, ++k) {
      e[k] = etas[i];
      w[k] = omegas[j];
      m[k] = map(i, j);
    }
  auto meta = metadata(c, "validity-map");
  meta["eta_range"] = {1e-5, 1.0};
  meta["omega_range"] = {1e-5, 1.0};
  meta["points_per_axis"] = 21;
  meta["quantity"] = "|2 xi zeta|; eta column overrides config.eta";
  meta["reproduce"] = "flicker preset fig1a";
  ArtifactSet out;
  out.add_series("fig1a_validity", {"eta", "omega", "correction_abs"}, {e, w, m}, meta);
  return out;
}

}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  const int threads = std::clamp(workers, 1, std::max(n, 1));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v{"kernels", "propagator", "correlation", "coefficients", "noise", "wigner"};
  return v;
}

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids{"fig1a", "fig1b", "fig2", "fig3", "fig4-temps", "fig5-wigner"};
  return ids;
}

ArtifactSet run_verb(const std::string& verb, const RunConfig& config) {
  config.validate();
  return dispatch(verb, config, verb);
}

ArtifactSet run_preset(const std::string& id, const RunConfig& base, int workers) {
  if (std::find(preset_ids().begin(), preset_ids().end(), id) == preset_ids().end())
    throw DomainError("unknown preset '" + id + "'");
  base.validate();
  RunConfig c = base;
  c.theta = 0.654;  // 5 GHz, 25 mK
  c.temperature_kelvin.reset();
  c.cutoff_ratio = 1.0;
  std::vector<std::function<ArtifactSet()>> tasks;

  if (id == "fig1a") return preset_fig1a(c);
  if (id == "fig1b") {
    for (double x : kXs) {
      RunConfig k = c;
      k.eta = 1e-3;
      k.x = x;
      k.omega_min = 1e-4;
      k.omega_max = 10.0;
      k.omega_points = 151;
      tasks.push_back([k] { return noise(k, "fig1b_x" + tag(k.x), 1e-4, 1e-2); });
    }
  } else if (id == "fig2" || id == "fig3") {
    for (double eta : {1e-3, 1e-2})
      for (double x : kXs) {
        RunConfig k = c;
        k.eta = eta;
        k.x = x;
        k.horizon = 20.0;
        const std::string stem = id + "_eta" + tag(eta) + "_x" + tag(x);
        if (id == "fig2")
          tasks.push_back([k, stem] { return propagator(k, stem); });
        else
          tasks.push_back([k, stem] { return coefficients(k, stem); });
      }
  } else if (id == "fig4-temps") {
    for (double kelvin : {0.025, 1.0, 2.5}) {
      RunConfig k = one_ghz(c, kelvin);
      k.eta = 1e-3;
      k.x = 0.9999;
      k.horizon = 20.0;
      tasks.push_back([k] { return coefficients(k, "fig4_T" + tag(*k.temperature_kelvin) + "K"); });
    }
  } else if (id == "fig5-wigner") {
    for (double x : {0.25, 0.9999})
      for (auto [n, m] : {std::pair{0, 3}, std::pair{2, 3}}) {
        RunConfig k = one_ghz(c, 2.5);
        k.eta = 1e-3;
        k.x = x;
        k.state_n = n;
        k.state_m = m;
        k.snapshot_times = {0.0, 1.0, 1.5, 2.0};
        const std::string stem = "fig5_x" + tag(x) + "_n" + std::to_string(n) + "m" + std::to_string(m);
        tasks.push_back([k, stem] { return wigner(k, stem); });
      }
  }
  return run_tasks(std::move(tasks), workers);
}

bool CompareReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

json CompareReport::to_json() const {
  json j;
  j["passed"] = passed();
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"max_error", c.max_error}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  return j;
}

namespace {

CompareCheck check(std::string name, double error, double tolerance) {
  return {std::move(name), error, tolerance, std::isfinite(error) && error <= tolerance};
}

// Discrete-bath u_N, v_N against the Volterra path on t <= 20, for N in {250, 500, 1000, 2000}.
std::vector<CompareCheck> bath_checks(int workers) {
  const auto model = ReservoirModel::from_x(1e-2, 0.5, 1.0, 1.0, 0.654);
  const TimeGrid grid{0.0, 5e-3, 4000};
  const auto solution = solve_greens(model, grid);
  std::vector<double> times;
  for (Eigen::Index k = 0; k <= grid.n_steps; k += 20) times.push_back(grid.time(k));
  const std::vector<Eigen::Index> sizes{250, 500, 1000, 2000};
  std::vector<double> u_err(sizes.size()), v_err(sizes.size()), recurrence(sizes.size());
  parallel_for(static_cast<int>(sizes.size()), workers, [&](int i) {
    const auto bath = make_discrete_bath(model, sizes[i]);
    recurrence[i] = bath.recurrence_time(model.omega0);
    const auto dyn = bath_u_v(bath, model, times);
    double eu = 0.0, ev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      eu = std::max(eu, std::abs(dyn.u[k] - solution.u[20 * k]));
      ev = std::max(ev, std::abs(dyn.v[k] - solution.v[20 * k]));
    }
    u_err[i] = eu;
    v_err[i] = ev;
  });
  std::vector<CompareCheck> out;
  double worst_rise_u = 0.0, worst_rise_v = 0.0, horizon_ratio = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out.push_back(check("bath_u_N" + std::to_string(sizes[i]), u_err[i], i + 1 == sizes.size() ? 1e-3 : 1.0));
    out.push_back(check("bath_v_N" + std::to_string(sizes[i]), v_err[i], i + 1 == sizes.size() ? 5e-3 : 1.0));
    if (i > 0) {
      worst_rise_u = std::max(worst_rise_u, u_err[i] - u_err[i - 1]);
      worst_rise_v = std::max(worst_rise_v, v_err[i] - v_err[i - 1]);
    }
    horizon_ratio = std::max(horizon_ratio, grid.horizon() / recurrence[i]);
  }
  out.push_back(check("bath_u_monotone_in_N", std::max(worst_rise_u, 0.0), 0.0));
  // Weight below the lowest mode, int_0^wmin J theta/w dw/2pi = eta theta wmin^s / s (wc = 1),
  // times |int u|^2 <= 4: v_N cannot converge past this floor.
  const double floor = 4.0 * model.eta * model.theta * std::pow(1e-6, model.s) / model.s;
  out.push_back(check("bath_v_monotone_in_N", std::max(worst_rise_v, 0.0), floor));
  out.push_back(check("bath_horizon_over_recurrence", horizon_ratio, 1.0));
  return out;
}

// Relative difference of brute_force_v and compute_v at t in {1, 5, 10}.
std::vector<CompareCheck> brute_force_checks(int workers) {
  const std::vector<double> xs{0.25, 0.9999};
  std::vector<double> err(xs.size());
  parallel_for(static_cast<int>(xs.size()), workers, [&](int i) {
    const auto model = ReservoirModel::from_x(1e-3, xs[i], 1.0, 1.0, 0.654);
    const auto grid = TimeGrid::covering(10.0, default_dt(model));
    const auto solution = solve_greens(model, grid);
    double worst = 0.0;
    for (double t : {1.0, 5.0, 10.0}) {
      const auto k = static_cast<Eigen::Index>(std::llround(t / grid.dt));
      const double brute = brute_force_v(model, solution.u, grid, k);
      worst = std::max(worst, std::abs(brute - solution.v[k]) / std::abs(brute));
    }
    err[i] = worst;
  });
  std::vector<CompareCheck> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(check("brute_force_v_x" + tag(xs[i]), err[i], 1e-6));
  return out;
}

// Master equation plus displaced parity against the analytic field at 2.5 K, 1 GHz.
std::vector<CompareCheck> wigner_checks(int workers) {
  struct Case {
    double x;
    SuperpositionState state;
  };
  std::vector<Case> cases;
  for (double x : {0.25, 0.5, 0.75})
    for (auto s : {SuperpositionState{0, 3}, SuperpositionState{2, 3}}) cases.push_back({x, s});
  const std::vector<double> times{0.0, 1.0, 1.5, 2.0};
  struct Result {
    double field = 0.0, trace = 0.0, hermitian = 0.0, negativity = 0.0;
  };
  std::vector<Result> results(cases.size());
  parallel_for(static_cast<int>(cases.size()), workers, [&](int i) {
    const auto model = ReservoirModel::from_x(1e-3, cases[i].x, 1.0, 1.0, theta_from_kelvin(2.5, 1e9));
    const TimeGrid grid{0.0, 1e-3, 2000};
    const auto solution = solve_greens(model, grid);
    const auto coeffs = master_coefficients(solution.u, solution.v, grid);
    Result r;
    std::vector<TruncatedDensityMatrix> snaps;
    try {
      snaps = integrate_master_equation(coeffs, cases[i].state, fock_cutoff(cases[i].state, solution.v.maxCoeff()), times);
    } catch (const SolverError&) {
      r.field = r.trace = r.hermitian = r.negativity = kNan;
      results[i] = r;
      return;
    }
    for (const auto& snap : snaps) {
      const auto [u, v] = interpolate_uv(solution, snap.time);
      for (int a = 0; a <= 20; ++a)
        for (int b = 0; b <= 20; ++b) {
          const std::complex<double> z(-4.0 + 0.4 * a, -4.0 + 0.4 * b);
          r.field = std::max(r.field, std::abs(wigner_from_density_matrix(snap.rho, z) - w_superposition(cases[i].state, z, u, v)));
        }
      r.trace = std::max(r.trace, snap.trace_error);
      r.hermitian = std::max(r.hermitian, snap.hermiticity_error);
      r.negativity = std::max(r.negativity, -snap.min_eigenvalue);
    }
    results[i] = r;
  });
  std::vector<CompareCheck> out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string suffix = "_x" + tag(cases[i].x) + "_n" + std::to_string(cases[i].state.n) + "m" + std::to_string(cases[i].state.m);
    out.push_back(check("wigner_path" + suffix, results[i].field, 1e-4));
    out.push_back(check("density_trace" + suffix, results[i].trace, 1e-6));
    out.push_back(check("density_hermitian" + suffix, results[i].hermitian, 1e-10));
    out.push_back(check("density_negativity" + suffix, std::max(results[i].negativity, 0.0), 1e-8));
  }
  return out;
}

// theta = 0: every thermal quantity is identically zero.
std::vector<CompareCheck> zero_temperature_checks() {
  double worst = 0.0;
  for (double x : kXs) {
    const auto model = ReservoirModel::from_x(1e-3, x, 1.0, 1.0, 0.0);
    const auto grid = TimeGrid::covering(5.0, default_dt(model));
    const auto solution = solve_greens(model, grid);
    const auto coeffs = master_coefficients(solution.u, solution.v, grid);
    worst = std::max(worst, solution.v.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < grid.size(); ++k)
      if (coeffs.defined[k]) worst = std::max(worst, std::abs(coeffs.gamma_tilde[k]));
    worst = std::max(worst, std::abs(brute_force_v(model, solution.u, grid, grid.n_steps)));
    const auto dyn = bath_u_v(make_discrete_bath(model, 100), model, {0.0, 2.5, 5.0});
    worst = std::max(worst, dyn.v.cwiseAbs().maxCoeff());
  }
  return {check("zero_temperature_thermal_terms", worst, 0.0)};
}

}  // namespace

CompareReport run_compare(const RunConfig& config, int workers) {
  config.validate();
  CompareReport report;
  for (auto& c : bath_checks(workers)) report.checks.push_back(std::move(c));
  for (auto& c : brute_force_checks(workers)) report.checks.push_back(std::move(c));
  for (auto& c : wigner_checks(workers)) report.checks.push_back(std::move(c));
  for (auto& c : zero_temperature_checks()) report.checks.push_back(std::move(c));
  return report;
}

}  // namespace flicker::cli
