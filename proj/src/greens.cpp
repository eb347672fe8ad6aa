#include "flicker/greens.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "flicker/quadrature.hpp"
#include "flicker/spectral.hpp"

namespace flicker {
namespace {

using cd = std::complex<double>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_grid_match(const Eigen::VectorXcd& u, const TimeGrid& grid, const char* where) {
  grid.validate();
  if (u.size() != grid.size()) throw DomainError(std::string(where) + ": series length does not match the grid");
}

// Rotating-frame solve on n_steps steps of size dt; returns u.
Eigen::VectorXcd volterra_pass(const ReservoirModel& model, double dt, Eigen::Index n_steps) {
  const Eigen::Index n = n_steps + 1;
  const double w0 = model.omega0;
  // k(t) = g(t) e^{i w0 t}; w = e^{i w0 t} u obeys dw/dt = -int k(t - tau) w(tau) dtau.
  Eigen::VectorXcd k(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * dt;
    k[j] = kernel_g(model, t) * std::polar(1.0, w0 * t);
  }

  Eigen::VectorXcd w(n);
  w[0] = 1.0;
  cd rate_prev = 0.0;  // dw/dt at the previous sample
  const cd denom = 1.0 + 0.25 * dt * dt * k[0];
  for (Eigen::Index step = 1; step < n; ++step) {
    // S = k_step w_0 / 2 + sum_{j=1}^{step-1} k_{step-j} w_j
    cd history = 0.5 * k[step] * w[0];
    for (Eigen::Index j = 1; j < step; ++j) history += k[step - j] * w[j];
    w[step] = (w[step - 1] + 0.5 * dt * rate_prev - 0.5 * dt * dt * history) / denom;
    rate_prev = -dt * history - 0.5 * dt * k[0] * w[step];
  }

  Eigen::VectorXcd u(n);
  for (Eigen::Index j = 0; j < n; ++j) u[j] = w[j] * std::polar(1.0, -w0 * static_cast<double>(j) * dt);
  return u;
}

// Trapezoid weight of sample j on [0, last].
double trapezoid_weight(Eigen::Index j, Eigen::Index last) {
  return (last > 0 && (j == 0 || j == last)) ? 0.5 : 1.0;
}

// g~ on lags 0..n-1 with g~(-t) = conj(g~(t)).
struct NoiseKernel {
  Eigen::VectorXcd table;
  cd operator()(Eigen::Index lag) const { return lag >= 0 ? table[lag] : std::conj(table[-lag]); }
};

}  // namespace

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("TimeGrid: dt must be > 0");
  if (n_steps < 2) throw DomainError("TimeGrid: n_steps must be >= 2");
  if (!std::isfinite(t0)) throw DomainError("TimeGrid: t0 must be finite");
}

TimeGrid TimeGrid::covering(double horizon, double dt, double t0) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw DomainError("TimeGrid::covering: horizon and dt must be > 0");
  const auto steps = static_cast<Eigen::Index>(std::ceil(horizon / dt - 1e-9));
  TimeGrid grid{t0, dt, std::max<Eigen::Index>(steps, 2)};
  grid.validate();
  return grid;
}

double default_dt(const ReservoirModel& model) { return model.s <= 0.25 ? 1e-3 : 5e-3; }

VolterraResult solve_u_volterra(const ReservoirModel& model, const TimeGrid& grid) {
  model.validate();
  grid.validate();
  VolterraResult result;
  result.u = volterra_pass(model, grid.dt, grid.n_steps);

  // Richardson-style estimate from the coarse pass on even samples.
  const Eigen::Index coarse_steps = grid.n_steps / 2;
  result.error = Eigen::VectorXd::Zero(grid.size());
  if (coarse_steps >= 1) {
    const Eigen::VectorXcd coarse = volterra_pass(model, 2.0 * grid.dt, coarse_steps);
    for (Eigen::Index j = 0; j <= coarse_steps; ++j) result.error[2 * j] = std::abs(result.u[2 * j] - coarse[j]) / 3.0;
    for (Eigen::Index j = 1; j < grid.size(); j += 2) {
      const double right = j + 1 < grid.size() ? result.error[j + 1] : result.error[j - 1];
      result.error[j] = std::max(result.error[j - 1], right);
    }
  }
  result.max_error = result.error.maxCoeff();
  result.unstable = (result.u.array().abs() > 1.0 + 1e-6).any();
  return result;
}

SpectralResult solve_u_spectral(const ReservoirModel& model, const TimeGrid& grid, const Tolerances& tol) {
  model.validate();
  grid.validate();
  SpectralResult result;
  const Eigen::Index n = grid.size();
  result.u.resize(n);

  if (model.eta == 0.0) {
    for (Eigen::Index k = 0; k < n; ++k) result.u[k] = std::polar(1.0, -model.omega0 * static_cast<double>(k) * grid.dt);
    result.residue_z = 1.0;
    return result;
  }

  const auto mode = find_localized_mode(model);
  const double z = mode.exists ? mode.residue_z : 0.0;
  result.residue_z = z;

  auto spectral_function = [&](double omega) {
    const double gamma = decay_rate(model, omega);
    const double detuning = omega - model.omega0 - self_energy_shift(model, omega, tol);
    return gamma / (std::numbers::pi * (detuning * detuning + gamma * gamma));
  };

  const double wc = model.omega_c;
  const double lo = 1e-14 * std::min(wc, model.omega0);
  const double hi = 60.0 * wc + 2.0 * model.omega0;
  const double peak = std::clamp(model.omega0 + self_energy_shift(model, model.omega0, tol), 4.0 * lo, 0.5 * hi);

  std::vector<double> breaks = quad::geometric_breakpoints(lo, std::min(0.1 * model.omega0, 0.5 * peak), 2);
  const Tolerances partition_tol{1e-13, 1e-11};
  for (const auto& [a, b] : {std::pair{breaks.back(), peak}, std::pair{peak, hi}}) {
    const auto r = quad::integrate(spectral_function, a, b, partition_tol, 20000);
    if (!r.converged) throw ConvergenceError("solve_u_spectral: spectral function partition failed", r.error);
    breaks.insert(breaks.end(), r.partition.begin() + 1, r.partition.end());
  }
  // Phase change across a panel stays below ~6 rad at the horizon, up to where A is negligible.
  const double max_width = 6.0 / std::max(grid.horizon(), 1.0);
  const double limit_to = std::min(hi, 40.0 * wc + 2.0 * model.omega0);
  std::vector<double> capped;
  {
    std::vector<double> head, tail;
    for (double b : breaks) (b <= limit_to ? head : tail).push_back(b);
    if (!tail.empty() && (head.empty() || head.back() < limit_to)) head.push_back(limit_to);
    capped = quad::limit_panel_width(head, max_width);
    for (double b : tail)
      if (b > capped.back()) capped.push_back(b);
  }
  const auto rule = quad::make_panel_rule(capped, 20);

  std::vector<double> omegas = rule.nodes;
  std::vector<double> amplitudes(omegas.size());
  double total = z;
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    amplitudes[j] = rule.weights[j] * spectral_function(omegas[j]);
    total += amplitudes[j];
  }
  // [0, lo]: A ~ A(lo) (w/lo)^s, phase negligible.
  const double below = spectral_function(lo) * lo / (model.s + 1.0);
  total += below;
  result.sum_rule_deviation = std::abs(total - 1.0);
  result.nodes = static_cast<Eigen::Index>(omegas.size());

  // Phases by rotation, re-seeded exactly every 64 samples.
  std::vector<cd> phase(omegas.size(), cd(1.0, 0.0));
  std::vector<cd> rotation(omegas.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) rotation[j] = std::polar(1.0, -omegas[j] * grid.dt);
  const double log_z = mode.exists ? mode.log_residue_z : -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * grid.dt;
    if (k % 64 == 0) {
      for (std::size_t j = 0; j < omegas.size(); ++j) phase[j] = std::polar(1.0, -omegas[j] * t);
    }
    cd sum = below;
    for (std::size_t j = 0; j < omegas.size(); ++j) {
      sum += amplitudes[j] * phase[j];
      phase[j] *= rotation[j];
    }
    if (std::isfinite(log_z)) sum += std::exp(log_z) * std::polar(1.0, -mode.omega_b * t);
    result.u[k] = sum;
  }
  return result;
}

Eigen::VectorXd compute_v(const ReservoirModel& model, const Eigen::VectorXcd& u, const TimeGrid& grid) {
  require_grid_match(u, grid, "compute_v");
  const Eigen::Index n = grid.size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  if (model.theta == 0.0 || model.eta == 0.0) return v;

  const NoiseKernel kernel{tabulate_g_tilde(model, grid.dt, n)};
  const double dt2 = grid.dt * grid.dt;
  // M_ij = g~(i - j) conj(u_i) u_j is Hermitian. With w_0 = 1/2 and w_j = 1 otherwise,
  // P_k = sum_{i,j<=k} w_i w_j M_ij; the trapezoid sum is P_k - Re R_k + M_kk / 4,
  // R_k = sum_{j<=k} w_j M_kj.
  double full = 0.0;            // P_k
  double imaginary_trace = 0.0;  // sum of Im M_kk, zero for a Hermitian kernel
  for (Eigen::Index k = 0; k < n; ++k) {
    const cd uk_conj = std::conj(u[k]);
    cd row = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) row += (j == 0 ? 0.5 : 1.0) * kernel(k - j) * u[j];
    row *= uk_conj;
    const cd diag = kernel(0) * std::norm(u[k]);
    const double wk = k == 0 ? 0.5 : 1.0;
    full += 2.0 * wk * row.real() + wk * wk * diag.real();
    imaginary_trace += std::abs(diag.imag());
    if (k == 0) continue;
    const double edge_row = row.real() + diag.real();
    v[k] = dt2 * (full - edge_row + 0.25 * diag.real());
    if (dt2 * imaginary_trace > 1e-8 * std::max(1.0, std::abs(v[k])))
      throw SolverError("compute_v: imaginary residue exceeds 1e-8 max(1, v)");
  }
  return v;
}

Eigen::VectorXcd compute_v_two_time(const ReservoirModel& model, const Eigen::VectorXcd& u, const TimeGrid& grid,
                                    Eigen::Index t_index, Eigen::Index max_lag) {
  require_grid_match(u, grid, "compute_v_two_time");
  if (t_index < 0 || max_lag < 0 || t_index + max_lag >= grid.size())
    throw DomainError("compute_v_two_time: t and t + tau must lie on the solved grid");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(max_lag + 1);
  if (model.theta == 0.0 || model.eta == 0.0) return out;

  const Eigen::Index K = t_index;
  const NoiseKernel kernel{tabulate_g_tilde(model, grid.dt, K + max_lag + 1)};
  // v(t, t + tau) = int_0^t da int_0^{t+tau} db u(a) g~(b - a - tau) conj(u(b)).
  // y(n) = sum_a c_a u_a g~(n - a) for n = b - m in [-max_lag, K].
  Eigen::VectorXcd y(K + max_lag + 1);
  for (Eigen::Index n = -max_lag; n <= K; ++n) {
    cd sum = 0.0;
    for (Eigen::Index a = 0; a <= K; ++a) sum += trapezoid_weight(a, K) * u[a] * kernel(n - a);
    y[n + max_lag] = sum;
  }
  const double dt2 = grid.dt * grid.dt;
  for (Eigen::Index m = 0; m <= max_lag; ++m) {
    const Eigen::Index last = K + m;
    cd sum = 0.0;
    for (Eigen::Index b = 0; b <= last; ++b) sum += trapezoid_weight(b, last) * std::conj(u[b]) * y[b - m + max_lag];
    out[m] = dt2 * sum;
  }
  if (K == 0) out.setZero();
  return out;
}

MasterCoefficients master_coefficients(const Eigen::VectorXcd& u, const Eigen::VectorXd& v, const TimeGrid& grid,
                                       double division_floor) {
  require_grid_match(u, grid, "master_coefficients");
  if (v.size() != u.size()) throw DomainError("master_coefficients: u and v lengths differ");
  const Eigen::Index n = grid.size();
  const double dt = grid.dt;
  MasterCoefficients c;
  c.grid = grid;
  c.omega0_prime = Eigen::VectorXd::Constant(n, kNaN);
  c.gamma = Eigen::VectorXd::Constant(n, kNaN);
  c.gamma_tilde = Eigen::VectorXd::Constant(n, kNaN);
  c.defined = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false);

  auto above_floor = [&](Eigen::Index j) { return std::abs(u[j]) >= division_floor; };
  auto log_ratio = [&](Eigen::Index j) { return std::log(u[j + 1] / u[j]); };  // log u_{j+1} - log u_j

  for (Eigen::Index k = 0; k < n; ++k) {
    cd rate;  // du/dt / u
    double vdot;
    if (k == 0) {
      if (!(above_floor(0) && above_floor(1) && above_floor(2))) continue;
      rate = (3.0 * log_ratio(0) - log_ratio(1)) / (2.0 * dt);
      vdot = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
    } else if (k == n - 1) {
      if (!(above_floor(k) && above_floor(k - 1) && above_floor(k - 2))) continue;
      rate = (3.0 * log_ratio(k - 1) - log_ratio(k - 2)) / (2.0 * dt);
      vdot = (3.0 * v[k] - 4.0 * v[k - 1] + v[k - 2]) / (2.0 * dt);
    } else {
      if (!(above_floor(k - 1) && above_floor(k) && above_floor(k + 1))) continue;
      rate = (log_ratio(k - 1) + log_ratio(k)) / (2.0 * dt);
      vdot = (v[k + 1] - v[k - 1]) / (2.0 * dt);
    }
    c.omega0_prime[k] = -rate.imag();
    c.gamma[k] = -rate.real();
    c.gamma_tilde[k] = vdot - 2.0 * v[k] * rate.real();
    c.defined[k] = true;
  }
  return c;
}

GreensSolution solve_greens(const ReservoirModel& model, const TimeGrid& grid) {
  auto volterra = solve_u_volterra(model, grid);
  GreensSolution solution;
  solution.grid = grid;
  solution.v = compute_v(model, volterra.u, grid);
  solution.u = std::move(volterra.u);
  solution.u_error = std::move(volterra.error);
  solution.unstable = volterra.unstable;
  return solution;
}

}  // namespace flicker
