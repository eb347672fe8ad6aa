#include "flicker/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flicker {
namespace {

using cd = std::complex<double>;

void require_nonnegative_v(double v) {
  if (!(v >= 0.0)) throw DomainError("wigner: v must be >= 0");
}

// Repeated multiplication: std::pow(complex, int) goes through log and fails at 0^0.
cd ipow(cd base, int k) {
  cd result = 1.0;
  for (int i = 0; i < k; ++i) result *= base;
  return result;
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// sum_p c_p C^p A^(n-p) B^(m-p), c_p = sqrt(n! m!) / (p! (n-p)! (m-p)!), in log-gamma form.
cd cross_sum(int n, int m, cd a, cd b, double c) {
  const double half_log = 0.5 * (log_factorial(n) + log_factorial(m));
  cd sum = 0.0;
  for (int p = 0; p <= std::min(n, m); ++p) {
    const double coefficient = std::exp(half_log - log_factorial(p) - log_factorial(n - p) - log_factorial(m - p));
    sum += coefficient * std::pow(c, p) * ipow(a, n - p) * ipow(b, m - p);
  }
  return sum;
}

double trapezoid_weight(Eigen::Index i, Eigen::Index n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

void SuperpositionState::validate() const {
  if (n < 0 || m < 0) throw DomainError("SuperpositionState: photon numbers must be >= 0");
  if (n == m) throw DomainError("SuperpositionState: n and m must differ");
}

std::string SuperpositionState::label() const {
  return "(|" + std::to_string(n) + "> + |" + std::to_string(m) + ">)/sqrt(2)";
}

double omega_factor(double v) {
  require_nonnegative_v(v);
  return 2.0 / (1.0 + 2.0 * v);
}

double w_vacuum(cd z, cd /*u*/, double v) {
  const double omega = omega_factor(v);
  return omega / std::numbers::pi * std::exp(-omega * std::norm(z));
}

double w_fock_diagonal(int n, cd z, cd u, double v) {
  if (n < 0) throw DomainError("w_fock_diagonal: n must be >= 0");
  const double omega = omega_factor(v);
  const double radial = std::norm(u) * omega * omega * std::norm(z);
  const double damping = 1.0 - std::norm(u) * omega;
  double sum = 0.0;
  for (int p = 0; p <= n; ++p) {
    const double log_c = log_factorial(n) - log_factorial(p) - 2.0 * log_factorial(n - p);
    sum += std::exp(log_c) * std::pow(radial, n - p) * std::pow(damping, p);
  }
  return w_vacuum(z, u, v) * sum;
}

double w_interference(const SuperpositionState& state, cd z, cd u, double v) {
  state.validate();
  const double omega = omega_factor(v);
  const cd a = std::conj(z) * omega * u;  // attached to the ket photon number
  const cd b = z * omega * std::conj(u);
  const double c = 1.0 - std::norm(u) * omega;
  const cd first = cross_sum(state.n, state.m, a, b, c);
  const cd second = cross_sum(state.m, state.n, a, b, c);
  const cd total = first + second;
  if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total)))
    throw SolverError("w_interference: interference sums are not mutually conjugate");
  return 0.5 * w_vacuum(z, u, v) * total.real();
}

double w_superposition(const SuperpositionState& state, cd z, cd u, double v) {
  state.validate();
  return 0.5 * (w_fock_diagonal(state.n, z, u, v) + w_fock_diagonal(state.m, z, u, v)) +
         w_interference(state, z, u, v);
}

cd propagating_kernel(cd z, cd u, double v, cd alpha0, cd alpha0p_conj) {
  const double omega = omega_factor(v);
  const cd exponent = std::conj(z) * omega * u * alpha0 + z * omega * std::conj(u) * alpha0p_conj +
                      (1.0 - std::norm(u) * omega) * alpha0p_conj * alpha0;
  return w_vacuum(z, u, v) * std::exp(exponent);
}

double wigner_extent(const SuperpositionState& state, cd u, double v, const WignerGridSpec& spec) {
  if (!spec.auto_extent) return spec.extent;
  const double sigma = std::sqrt((1.0 + 2.0 * v) / 4.0);
  const double radius = std::abs(u) * std::sqrt(2.0 * std::max(state.n, state.m) + 1.0);
  return std::max(spec.extent, radius + 8.0 * sigma);
}

WignerField wigner_field(const SuperpositionState& state, cd u, double v, double time, double extent, int points) {
  state.validate();
  if (points < 2) throw DomainError("wigner_field: need at least two points per axis");
  if (!(extent > 0.0)) throw DomainError("wigner_field: extent must be > 0");
  WignerField field;
  field.re_grid = Eigen::VectorXd::LinSpaced(points, -extent, extent);
  field.im_grid = field.re_grid;
  field.values.resize(points, points);
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) field.values(i, j) = w_superposition(state, cd(field.re_grid[i], field.im_grid[j]), u, v);
  field.time = time;
  field.state_label = state.label();
  field.normalization = field_integral(field);
  return field;
}

double field_integral(const WignerField& field) {
  const Eigen::Index nx = field.re_grid.size(), ny = field.im_grid.size();
  const double hx = (field.re_grid[nx - 1] - field.re_grid[0]) / static_cast<double>(nx - 1);
  const double hy = (field.im_grid[ny - 1] - field.im_grid[0]) / static_cast<double>(ny - 1);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) sum += trapezoid_weight(i, nx) * trapezoid_weight(j, ny) * field.values(i, j);
  return sum * hx * hy;
}

std::pair<cd, double> interpolate_uv(const GreensSolution& solution, double t) {
  const auto& grid = solution.grid;
  const double position = (t - grid.t0) / grid.dt;
  const double last = static_cast<double>(grid.n_steps);
  if (!(position >= -1e-9) || !(position <= last + 1e-9)) throw DomainError("interpolate_uv: time outside the solved range");
  const double clamped = std::clamp(position, 0.0, last);
  const auto k = std::min(static_cast<Eigen::Index>(std::floor(clamped)), grid.n_steps - 1);
  const double f = clamped - static_cast<double>(k);
  const cd u = (1.0 - f) * solution.u[k] + f * solution.u[k + 1];
  const double v = (1.0 - f) * solution.v[k] + f * solution.v[k + 1];
  return {u, std::max(v, 0.0)};
}

std::vector<WignerField> snapshot_series(const SuperpositionState& state, const GreensSolution& solution,
                                         const std::vector<double>& times, const WignerGridSpec& spec) {
  state.validate();
  std::vector<WignerField> fields;
  fields.reserve(times.size());
  for (double t : times) {
    const auto [u, v] = interpolate_uv(solution, t);
    fields.push_back(wigner_field(state, u, v, t, wigner_extent(state, u, v, spec), spec.points));
  }
  return fields;
}

}  // namespace flicker
