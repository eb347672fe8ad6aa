#include "flicker/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "flicker/spectral.hpp"

namespace flicker {
namespace {

using cd = std::complex<double>;

// Elementwise Fock-basis right-hand side of the master equation.
Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd& rho, double w, double gamma, double gamma_tilde,
                            const Eigen::VectorXd& sqrt_n) {
  const Eigen::Index dim = rho.rows();
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double nj = static_cast<double>(j), nk = static_cast<double>(k);
      const cd r = rho(j, k);
      // a rho a^dagger and a^dagger rho a
      const cd lower = (j + 1 < dim && k + 1 < dim) ? sqrt_n[j + 1] * sqrt_n[k + 1] * rho(j + 1, k + 1) : cd(0.0);
      const cd raise = (j > 0 && k > 0) ? sqrt_n[j] * sqrt_n[k] * rho(j - 1, k - 1) : cd(0.0);
      cd d = cd(0.0, -w * (nj - nk)) * r;
      d += gamma * (2.0 * lower - (nj + nk) * r);
      d += gamma_tilde * (lower + raise - (nj + nk + 1.0) * r);
      out(j, k) = d;
    }
  }
  return out;
}

void assess(TruncatedDensityMatrix& snap) {
  const Eigen::Index dim = snap.rho.rows();
  snap.trace_error = std::abs(snap.rho.trace() - 1.0);
  snap.hermiticity_error = (snap.rho - snap.rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd hermitian = 0.5 * (snap.rho + snap.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  snap.min_eigenvalue = solver.eigenvalues().minCoeff();
  snap.leakage = std::abs(snap.rho(dim - 1, dim - 1)) + std::abs(snap.rho(dim - 2, dim - 2));
}

// L_n^(a)(x) for n = 0..n_max by the forward three-term recurrence.
std::vector<double> laguerre_series(int n_max, double a, double x) {
  std::vector<double> l(static_cast<std::size_t>(n_max) + 1);
  l[0] = 1.0;
  if (n_max >= 1) l[1] = 1.0 + a - x;
  for (int n = 1; n < n_max; ++n) l[n + 1] = ((2.0 * n + 1.0 + a - x) * l[n] - (n + a) * l[n - 1]) / (n + 1.0);
  return l;
}

}  // namespace

double DiscreteBath::recurrence_time(double omega) const {
  const auto it = std::lower_bound(mode_freqs.data(), mode_freqs.data() + mode_freqs.size(), omega);
  const Eigen::Index k = std::clamp<Eigen::Index>(it - mode_freqs.data(), 1, mode_freqs.size() - 1);
  return 2.0 * std::numbers::pi / (mode_freqs[k] - mode_freqs[k - 1]);
}

DiscreteBath make_discrete_bath(const ReservoirModel& model, Eigen::Index n_modes, double omega_min, double omega_max) {
  model.validate();
  if (n_modes < 2) throw DomainError("make_discrete_bath: need at least two modes");
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) throw DomainError("make_discrete_bath: need 0 < omega_min < omega_max");
  DiscreteBath bath;
  bath.mode_freqs.resize(n_modes);
  bath.couplings.resize(n_modes);
  bath.widths.resize(n_modes);
  const double ratio = std::log(omega_max / omega_min) / static_cast<double>(n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k) {
    const double lo = omega_min * std::exp(ratio * static_cast<double>(k));
    const double hi = omega_min * std::exp(ratio * static_cast<double>(k + 1));
    const double w = std::sqrt(lo * hi);
    bath.mode_freqs[k] = w;
    bath.widths[k] = hi - lo;
    bath.couplings[k] = std::sqrt(spectral_density(model, w) * (hi - lo) / (2.0 * std::numbers::pi));
  }
  return bath;
}

BathDynamics bath_u_v(const DiscreteBath& bath, const ReservoirModel& model, const std::vector<double>& times) {
  const Eigen::Index n = bath.size();
  // Single-excitation Hamiltonian: [[w0, V^T], [V, diag(w_k)]].
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
  h(0, 0) = model.omega0;
  for (Eigen::Index k = 0; k < n; ++k) {
    h(0, k + 1) = bath.couplings[k];
    h(k + 1, 0) = bath.couplings[k];
    h(k + 1, k + 1) = bath.mode_freqs[k];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw SolverError("bath_u_v: eigendecomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& x = solver.eigenvectors();
  const Eigen::RowVectorXd x0 = x.row(0);

  Eigen::VectorXd occupations = Eigen::VectorXd::Zero(n);
  if (model.theta > 0.0)
    for (Eigen::Index k = 0; k < n; ++k) occupations[k] = occupation(model.theta, bath.mode_freqs[k], model.omega0);

  BathDynamics out;
  out.times = times;
  out.u.resize(static_cast<Eigen::Index>(times.size()));
  out.v.resize(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    Eigen::VectorXcd phased(n + 1);
    for (Eigen::Index j = 0; j <= n; ++j) phased[j] = x0[j] * std::polar(1.0, -lambda[j] * times[i]);
    // Row 0 of exp(-iHt): entries sum_j X_0j X_kj e^{-i lambda_j t}.
    const Eigen::VectorXcd row = x * phased;
    out.u[static_cast<Eigen::Index>(i)] = row[0];
    out.v[static_cast<Eigen::Index>(i)] = (occupations.array() * row.tail(n).array().abs2()).sum();
  }
  return out;
}

double brute_force_v(const ReservoirModel& model, const Eigen::VectorXcd& u, const TimeGrid& grid,
                     Eigen::Index t_index) {
  if (t_index < 0 || t_index >= u.size()) throw DomainError("brute_force_v: index outside the series");
  if (t_index == 0 || model.theta == 0.0 || model.eta == 0.0) return 0.0;
  std::vector<cd> kernel(static_cast<std::size_t>(t_index) + 1);
  for (Eigen::Index lag = 0; lag <= t_index; ++lag) kernel[lag] = kernel_g_tilde(model, static_cast<double>(lag) * grid.dt);
  auto g = [&](Eigen::Index lag) { return lag >= 0 ? kernel[lag] : std::conj(kernel[-lag]); };
  auto w = [&](Eigen::Index i) { return (i == 0 || i == t_index) ? 0.5 : 1.0; };
  cd sum = 0.0;
  for (Eigen::Index tau = 0; tau <= t_index; ++tau)
    for (Eigen::Index tau_p = 0; tau_p <= t_index; ++tau_p)
      sum += w(tau) * w(tau_p) * g(tau - tau_p) * std::conj(u[tau]) * u[tau_p];
  return (grid.dt * grid.dt * sum).real();
}

int fock_cutoff(const SuperpositionState& state, double v_max) {
  state.validate();
  const int floor = state.n + state.m + 8;
  if (!(v_max > 0.0)) return floor;
  const double tail = std::log(1e-10) / std::log(v_max / (1.0 + v_max));
  return std::max(floor, std::max(state.n, state.m) + static_cast<int>(std::ceil(tail)));
}

std::vector<TruncatedDensityMatrix> integrate_master_equation(const MasterCoefficients& coeffs,
                                                              const SuperpositionState& state, int n_max,
                                                              const std::vector<double>& snapshot_times) {
  state.validate();
  if (n_max < state.n + state.m + 8) throw DomainError("integrate_master_equation: n_max too small");
  if (!coeffs.defined.all()) throw DomainError("integrate_master_equation: coefficients undefined on the grid");
  const auto& grid = coeffs.grid;
  const Eigen::Index dim = n_max + 1;
  Eigen::VectorXd sqrt_n(dim);
  for (Eigen::Index j = 0; j < dim; ++j) sqrt_n[j] = std::sqrt(static_cast<double>(j));

  std::vector<Eigen::Index> targets;
  for (double t : snapshot_times) {
    const double steps = (t - grid.t0) / (2.0 * grid.dt);
    const auto k = static_cast<Eigen::Index>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(k)) > 1e-6 || k < 0 || 2 * k > grid.n_steps)
      throw DomainError("integrate_master_equation: snapshot time not on the 2 dt lattice of the grid");
    targets.push_back(k);
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(state.n, state.n) = rho(state.m, state.m) = rho(state.n, state.m) = rho(state.m, state.n) = 0.5;

  auto rhs = [&](const Eigen::MatrixXcd& r, Eigen::Index sample) {
    return master_rhs(r, coeffs.omega0_prime[sample], coeffs.gamma[sample], coeffs.gamma_tilde[sample], sqrt_n);
  };

  std::vector<TruncatedDensityMatrix> out(snapshot_times.size());
  const Eigen::Index last = *std::max_element(targets.begin(), targets.end());
  const double h = 2.0 * grid.dt;
  for (Eigen::Index step = 0;; ++step) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] != step) continue;
      out[i].time = snapshot_times[i];
      out[i].rho = rho;
      assess(out[i]);
      if (out[i].trace_error > 1e-6) throw SolverError("integrate_master_equation: trace drift above 1e-6");
      if (out[i].leakage > 1e-6) throw SolverError("integrate_master_equation: top-level leakage above 1e-6");
    }
    if (step == last) break;
    const Eigen::Index s0 = 2 * step;
    const Eigen::MatrixXcd k1 = rhs(rho, s0);
    const Eigen::MatrixXcd k2 = rhs(rho + 0.5 * h * k1, s0 + 1);
    const Eigen::MatrixXcd k3 = rhs(rho + 0.5 * h * k2, s0 + 1);
    const Eigen::MatrixXcd k4 = rhs(rho + h * k3, s0 + 2);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

Eigen::MatrixXcd displacement_matrix(cd beta, int dim) {
  Eigen::MatrixXcd d(dim, dim);
  const double x = std::norm(beta);
  const double log_abs = std::log(std::abs(beta));
  const double phase = std::arg(beta);
  for (int diff = 0; diff < dim; ++diff) {
    // k = j + diff: sqrt(j!/k!) beta^diff e^{-x/2} L_j^(diff)(x); the mirrored entry takes -conj(beta).
    const auto lag = laguerre_series(dim - 1 - diff, diff, x);
    for (int j = 0; j + diff < dim; ++j) {
      const int k = j + diff;
      double magnitude_log = 0.5 * (std::lgamma(j + 1.0) - std::lgamma(k + 1.0)) - 0.5 * x;
      if (diff > 0) magnitude_log += diff * log_abs;
      const double scale = (diff > 0 && x == 0.0) ? 0.0 : std::exp(magnitude_log);
      const double value = scale * lag[j];
      d(k, j) = std::polar(value, diff * phase);
      if (diff > 0) d(j, k) = std::polar(value, diff * (std::numbers::pi - phase));
    }
  }
  return d;
}

double wigner_from_density_matrix(const Eigen::MatrixXcd& rho, cd z) {
  const auto dim = static_cast<int>(rho.rows());
  const Eigen::MatrixXcd d = displacement_matrix(2.0 * z, dim);
  // tr[rho D P] = sum_{j,k} rho_jk <k|D|j> (-1)^j
  cd sum = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double parity = (j % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k < dim; ++k) sum += parity * rho(j, k) * d(k, j);
  }
  return 2.0 / std::numbers::pi * sum.real();
}

WignerField wigner_from_density_matrix(const TruncatedDensityMatrix& rho, double extent, int points) {
  if (points < 2) throw DomainError("wigner_from_density_matrix: need at least two points per axis");
  WignerField field;
  field.re_grid = Eigen::VectorXd::LinSpaced(points, -extent, extent);
  field.im_grid = field.re_grid;
  field.values.resize(points, points);
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j)
      field.values(i, j) = wigner_from_density_matrix(rho.rho, cd(field.re_grid[i], field.im_grid[j]));
  field.time = rho.time;
  field.state_label = "density matrix";
  field.normalization = field_integral(field);
  return field;
}

}  // namespace flicker
