// One line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "flicker/greens.hpp"
#include "flicker/noise.hpp"
#include "flicker/oracle.hpp"
#include "flicker/spectral.hpp"
#include "flicker/wigner.hpp"

using namespace flicker;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

constexpr double kTheta = 0.654;  // 5 GHz, 25 mK
const std::vector<double> kXs{0.25, 0.5, 0.75, 0.9999};

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

Eigen::VectorXd log_grid(double lo, double hi, int n) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return w;
}

GreensSolution preset_solution(double eta, double x, double theta, double horizon = 20.0) {
  const auto m = ReservoirModel::from_x(eta, x, 1.0, 1.0, theta);
  return solve_greens(m, TimeGrid::covering(horizon, default_dt(m)));
}

double max_defined_abs(const Eigen::VectorXd& values, const MasterCoefficients& c) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (c.defined[k]) worst = std::max(worst, std::abs(values[k]));
  return worst;
}

int sign_changes(const Eigen::VectorXd& values, const MasterCoefficients& c) {
  int changes = 0;
  double previous = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!c.defined[k] || values[k] == 0.0) continue;
    if (previous != 0.0 && (values[k] > 0.0) != (previous > 0.0)) ++changes;
    previous = values[k];
  }
  return changes;
}

Outcome criterion1() {
  double worst = 0.0;
  std::string fits;
  for (double x : kXs) {
    const auto m = ReservoirModel::from_x(1e-3, x, 1.0, 1.0, kTheta);
    const auto fit = fit_power_law(spectrum_series(m, log_grid(1e-4, 1e-2, 41)), 1e-4, 1e-2);
    worst = std::max(worst, std::abs(fit.exponent - x));
    fits += fmt(" %.4f", fit.exponent);
  }
  return {worst <= 0.05, "fitted exponents" + fits + fmt(", max |exponent - x| = %.2e (tol 0.05)", worst)};
}

Outcome criterion2() {
  const auto m = ReservoirModel::from_x(1e-3, 0.5, 1.0, 1.0, kTheta);
  const auto etas = log_grid(1e-5, 1.0, 21);
  const auto omegas = log_grid(1e-5, 1.0, 21);
  const auto map = validity_map(m, etas, omegas);
  double corner = 0.0, far = 1e300;
  bool monotone = true;
  const double edge = std::pow(10.0, -0.5) * (1 - 1e-12);
  for (Eigen::Index i = 0; i < etas.size(); ++i)
    for (Eigen::Index j = 0; j < omegas.size(); ++j) {
      if (etas[i] <= 1e-3 * (1 + 1e-12) && omegas[j] <= 1e-2 * (1 + 1e-12)) corner = std::max(corner, map(i, j));
      if (etas[i] >= edge || omegas[j] >= edge) far = std::min(far, map(i, j));
      if (etas[i] <= 1e-3 * (1 + 1e-12) && j > 0 && !(map(i, j) > map(i, j - 1))) monotone = false;
    }
  return {corner <= 0.05 && far > 0.5 && monotone,
          fmt("corner max %.4f (<= 0.05), outer min %.3f (> 0.5), monotone in omega for eta <= 1e-3: %s", corner, far,
              monotone ? "yes" : "no")};
}

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double eta : {1e-3, 1e-2})
    for (double x : kXs) {
      const auto m = ReservoirModel::from_x(eta, x, 1.0, 1.0, kTheta);
      const auto grid = TimeGrid::covering(20.0, default_dt(m));
      const auto volterra = solve_u_volterra(m, grid).u;
      const auto spectral = solve_u_spectral(m, grid).u;
      worst = std::max(worst, (volterra - spectral).cwiseAbs().maxCoeff());
    }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-4 && seconds < 60.0, fmt("sup |u_volterra - u_spectral| = %.2e (tol 1e-4), %.1f s (< 60 s)", worst, seconds)};
}

Outcome criterion4() {
  const auto m = ReservoirModel::from_x(1e-2, 0.5, 1.0, 1.0, kTheta);
  const TimeGrid grid{0.0, 5e-3, 4000};
  const auto solution = solve_greens(m, grid);
  std::vector<double> times;
  for (Eigen::Index k = 0; k <= grid.n_steps; k += 20) times.push_back(grid.time(k));
  std::vector<double> eu, ev;
  bool before_recurrence = true;
  for (Eigen::Index n : {250, 500, 1000, 2000}) {
    const auto bath = make_discrete_bath(m, n);
    before_recurrence = before_recurrence && grid.horizon() < bath.recurrence_time(m.omega0);
    const auto dyn = bath_u_v(bath, m, times);
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      a = std::max(a, std::abs(dyn.u[k] - solution.u[20 * k]));
      b = std::max(b, std::abs(dyn.v[k] - solution.v[20 * k]));
    }
    eu.push_back(a);
    ev.push_back(b);
  }
  bool monotone_u = true, monotone_v = true;
  // v_N misses the weight below the lowest mode: at most 4 eta theta wmin^s / s.
  const double floor = 4.0 * m.eta * m.theta * std::pow(1e-6, m.s) / m.s;
  for (std::size_t i = 1; i < eu.size(); ++i) {
    monotone_u = monotone_u && eu[i] < eu[i - 1];
    monotone_v = monotone_v && ev[i] - ev[i - 1] <= floor;
  }
  return {eu.back() <= 1e-3 && ev.back() <= 5e-3 && monotone_u && monotone_v && before_recurrence,
          fmt("N=2000: u err %.2e (tol 1e-3), v err %.2e (tol 5e-3); u err over N %.1e %.1e %.1e %.1e decreasing: %s; "
              "v err within truncation floor %.1e: %s; t <= 20 below recurrence: %s",
              eu.back(), ev.back(), eu[0], eu[1], eu[2], eu[3], monotone_u ? "yes" : "no", floor,
              monotone_v ? "yes" : "no", before_recurrence ? "yes" : "no")};
}

Outcome criterion5() {
  double min_gamma = 1e300, gamma_start = 0.0;
  int changes_deep = 0, changes_shallow = 0;
  for (double eta : {1e-3, 1e-2})
    for (double x : kXs) {
      const auto s = preset_solution(eta, x, kTheta);
      const auto c = master_coefficients(s.u, s.v, s.grid);
      gamma_start = std::max(gamma_start, std::abs(c.gamma[0]));
      for (Eigen::Index k = 1; k < c.gamma.size(); ++k)
        if (c.defined[k]) min_gamma = std::min(min_gamma, c.gamma[k]);
      if (eta == 1e-3 && x == 0.9999) changes_deep = sign_changes(c.gamma_tilde, c);
      if (eta == 1e-3 && x == 0.25) changes_shallow = sign_changes(c.gamma_tilde, c);
    }
  return {min_gamma > 0.0 && gamma_start < 1e-9 && changes_deep >= 3 && changes_deep > changes_shallow,
          fmt("min gamma(t > 0) = %.3e (> 0), |gamma(0)| = %.1e; gamma~ sign changes x=0.9999: %d (>= 3), x=0.25: %d",
              min_gamma, gamma_start, changes_deep, changes_shallow)};
}

Outcome criterion6() {
  std::vector<double> peaks;
  for (double x : kXs) peaks.push_back(preset_solution(1e-3, x, kTheta).v.maxCoeff());
  const bool ok = peaks[3] > peaks[0] && peaks[3] > peaks[1] && peaks[3] > peaks[2];
  return {ok, fmt("max v: x=0.25 %.4f, 0.5 %.4f, 0.75 %.4f, 0.9999 %.3f", peaks[0], peaks[1], peaks[2], peaks[3])};
}

Outcome criterion7() {
  std::vector<double> v_peak, g_peak;
  for (double kelvin : {0.025, 1.0, 2.5}) {
    const auto s = preset_solution(1e-3, 0.9999, theta_from_kelvin(kelvin, 1e9));
    const auto c = master_coefficients(s.u, s.v, s.grid);
    v_peak.push_back(s.v.maxCoeff());
    g_peak.push_back(max_defined_abs(c.gamma_tilde, c));
  }
  const bool ok = v_peak[0] < v_peak[1] && v_peak[1] < v_peak[2] && g_peak[0] < g_peak[1] && g_peak[1] < g_peak[2];
  return {ok, fmt("max v %.3g < %.3g < %.3g; max |gamma~| %.3g < %.3g < %.3g", v_peak[0], v_peak[1], v_peak[2], g_peak[0],
                  g_peak[1], g_peak[2])};
}

Outcome criterion8() {
  double cold = 0.0, free_u = 0.0, free_gamma = 0.0;
  for (double x : kXs) {
    const auto s = preset_solution(1e-3, x, 0.0);
    const auto c = master_coefficients(s.u, s.v, s.grid);
    cold = std::max({cold, s.v.cwiseAbs().maxCoeff(), max_defined_abs(c.gamma_tilde, c)});
    const auto f = preset_solution(0.0, x, kTheta);
    const auto fc = master_coefficients(f.u, f.v, f.grid);
    for (Eigen::Index k = 0; k < f.u.size(); ++k) free_u = std::max(free_u, std::abs(f.u[k] - std::polar(1.0, -f.grid.time(k))));
    free_gamma = std::max(free_gamma, max_defined_abs(fc.gamma, fc));
  }
  return {cold <= 1e-8 && free_u <= 1e-8 && free_gamma <= 1e-8,
          fmt("theta=0: max |v|, |gamma~| = %.1e; eta=0: max |u - e^{-i t}| = %.1e, max |gamma| = %.1e (tol 1e-8)", cold, free_u,
              free_gamma)};
}

Outcome criterion9() {
  const std::vector<double> times{0.0, 1.0, 1.5, 2.0};
  double norm_err = 0.0, bound_excess = -1.0, symmetry = 0.0, oracle = 0.0;
  for (double x : kXs) {
    const auto m = ReservoirModel::from_x(1e-3, x, 1.0, 1.0, theta_from_kelvin(2.5, 1e9));
    const TimeGrid grid{0.0, 1e-3, 2000};
    const auto solution = solve_greens(m, grid);
    const auto coeffs = master_coefficients(solution.u, solution.v, grid);
    for (auto state : {SuperpositionState{0, 3}, SuperpositionState{2, 3}}) {
      for (const auto& field : snapshot_series(state, solution, times)) {
        norm_err = std::max(norm_err, std::abs(field.normalization - 1.0));
        bound_excess = std::max(bound_excess, field.values.cwiseAbs().maxCoeff() - 2.0 / pi);
        if (state.n == 0) {
          const auto [u, v] = interpolate_uv(solution, field.time);
          const double scale = field.values.cwiseAbs().maxCoeff();
          for (double r : {0.3, 0.8, 1.4, 2.2})
            for (double phi : {0.05, 0.9, 2.4, 4.0}) {
              const cd z = std::polar(r, phi);
              const double a = w_superposition(state, z, u, v);
              const double b = w_superposition(state, z * std::polar(1.0, 2.0 * pi / 3.0), u, v);
              symmetry = std::max(symmetry, std::abs(a - b) / scale);
            }
        }
      }
      // Fock truncation is out of reach once v ~ 1e4 (x = 0.9999 at 2.5 K).
      if (x == 0.9999) continue;
      const auto snaps = integrate_master_equation(coeffs, state, fock_cutoff(state, solution.v.maxCoeff()), times);
      for (const auto& snap : snaps) {
        const auto [u, v] = interpolate_uv(solution, snap.time);
        for (int a = 0; a <= 20; ++a)
          for (int b = 0; b <= 20; ++b) {
            const cd z(-4.0 + 0.4 * a, -4.0 + 0.4 * b);
            oracle = std::max(oracle, std::abs(wigner_from_density_matrix(snap.rho, z) - w_superposition(state, z, u, v)));
          }
      }
    }
  }
  return {norm_err <= 1e-6 && bound_excess <= 1e-9 && symmetry <= 1e-12 && oracle <= 1e-4,
          fmt("max |int W - 1| = %.1e (tol 1e-6), max |W| - 2/pi = %.1e (tol 1e-9), 3-fold asymmetry %.1e, "
              "oracle pointwise %.1e (tol 1e-4; oracle for x <= 0.75)",
              norm_err, bound_excess, symmetry, oracle)};
}

Outcome criterion10() {
  std::string detail;
  bool ok = true;
  for (auto state : {SuperpositionState{0, 3}, SuperpositionState{2, 3}}) {
    std::vector<double> lobes;
    for (double x : {0.25, 0.9999}) {
      const auto solution = preset_solution(1e-3, x, theta_from_kelvin(2.5, 1e9), 2.0);
      const auto [u, v] = interpolate_uv(solution, 2.0);
      const double extent = wigner_extent(state, u, v, {});
      const auto axis = Eigen::VectorXd::LinSpaced(256, -extent, extent);
      double amplitude = 0.0;
      for (Eigen::Index i = 0; i < axis.size(); ++i)
        for (Eigen::Index j = 0; j < axis.size(); ++j)
          amplitude = std::max(amplitude, std::abs(w_interference(state, cd(axis[i], axis[j]), u, v)));
      lobes.push_back(amplitude);
    }
    ok = ok && lobes[1] < lobes[0];
    detail += fmt("%s%s: x=0.25 %.3e, x=0.9999 %.3e", detail.empty() ? "" : "; ", state.label().c_str(), lobes[0], lobes[1]);
  }
  return {ok, "interference amplitude at t=2, " + detail};
}

Outcome criterion11() {
  const auto m = ReservoirModel::from_x(1e-2, 0.25, 1.0, 1.0, kTheta);
  const double dt = 0.1;
  const Eigen::Index k = 24000;  // t = tau_max = 2400
  const TimeGrid grid{0.0, dt, 2 * k};
  const auto u = solve_u_volterra(m, grid).u;
  const auto correlation = compute_v_two_time(m, u, grid, k, k);
  const double omega_min = 16.0 * 2.0 * pi / (k * dt);
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(1961, omega_min, 3.0);
  const auto exact = spectrum_series(m, w).s2_values;
  const auto numeric = one_sided_fourier(correlation, dt, w);
  const double peak = exact.maxCoeff();
  double worst = 0.0;
  int compared = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (exact[i] < 1e-3 * peak) continue;
    ++compared;
    worst = std::max(worst, std::abs(numeric[i] / exact[i] - 1.0));
  }
  return {worst <= 0.02 && compared > 0,
          fmt("eta=1e-2, x=0.25, t=tau_max=2400: max rel err %.2e (tol 0.02) over %d samples in [%.3f, 3] with S2 >= 1e-3 peak",
              worst, compared, omega_min)};
}

Outcome criterion12() {
  const auto w = log_grid(1e-4, 1e4, 81);
  Eigen::VectorXd s(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) s[i] = classical_ensemble_spectrum(1.0, 1e-2, 1e2, w[i]);
  const auto fit = fit_power_law(w, s, 1e-1, 1e1);
  return {std::abs(fit.exponent - 1.0) <= 0.1, fmt("nu in [1e-2, 1e2], fit over [1e-1, 1e1]: slope -%.4f (tol 1 +- 0.1)", fit.exponent)};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                       criterion5, criterion6, criterion7,  criterion8,
                                                       criterion9, criterion10, criterion11, criterion12};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failures;
    std::printf("criterion %zu: %s %s\n", i + 1, outcome.passed ? "PASS" : "FAIL", outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
