#include "flicker/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flicker/quadrature.hpp"
#include "flicker/special.hpp"

namespace flicker {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// exp(-60) ~ 1e-26: the exponential cutoff makes the band effectively finite.
constexpr double kCutoffMultiple = 60.0;

// w^s exp(-w/wc): J(w)/(2 pi eta wc^(1-s)).
double band_shape(const ReservoirModel& m, double omega) {
  return std::pow(omega, m.s) * std::exp(-omega / m.omega_c);
}

double coupling_scale(const ReservoirModel& m) { return m.eta * std::pow(m.omega_c, 1.0 - m.s); }

// n(w) - theta w0 / w, bounded (-> -1/2) as w -> 0.
double occupation_remainder(double thermal_energy, double omega) {
  const double x = omega / thermal_energy;
  if (x < 1e-3) return -0.5 + x / 12.0 - x * x * x / 720.0;
  return 1.0 / std::expm1(x) - 1.0 / x;
}

bool near_ohmic(double s) { return std::abs(1.0 - s) < 1e-9; }

// I(a) = int_0^inf w^s exp(-w/wc) / (a + w) dw with a = exp(-log_depth).
double below_band_integral(const ReservoirModel& m, double log_depth) {
  const double s = m.s;
  const double c = m.omega_c;
  const double a = std::exp(-log_depth);
  const double z = a / c;

  if (near_ohmic(s)) {
    // Log-substituted quadrature; the closed form below is singular at s = 1.
    auto integrand = [&](double y) {
      const double w = std::exp(y);
      return std::exp((s + 1.0) * y - w / c) / (a + w);
    };
    const double lower = std::min(-log_depth, std::log(c)) - 40.0;
    const auto r = quad::integrate(integrand, lower, std::log(kCutoffMultiple * c), {1e-15, 1e-13});
    if (!r.converged) throw ConvergenceError("below_band_integral: quadrature failed", r.error);
    return r.value;
  }

  if (z >= 1.0) {
    // Gamma(s+1) a^s e^z Gamma(-s, z) with a^s z^-s = c^s.
    return std::tgamma(s + 1.0) * std::pow(c, s) * special::upper_gamma_scaled(-s, z);
  }

  // Series for Gamma(-s, z) at small z:
  // I = e^z [ -pi/sin(pi s) a^s - Gamma(s+1) c^s sum_k (-z)^k / (k! (k - s)) ].
  double series = 0.0;
  double power = 1.0;  // (-z)^k / k!
  for (int k = 0; k < 200; ++k) {
    const double term = power / (k - s);
    series += term;
    if (k > 0 && std::abs(term) < 1e-17 * std::abs(series)) break;
    power *= -z / (k + 1);
  }
  const double a_pow_s = std::exp(-s * log_depth);
  return std::exp(z) * (-kPi / std::sin(kPi * s) * a_pow_s - std::tgamma(s + 1.0) * std::pow(c, s) * series);
}

}  // namespace

double spectral_density(const ReservoirModel& model, double omega) {
  if (omega < 0.0) throw DomainError("spectral_density: omega must be >= 0");
  if (omega == 0.0) return 0.0;
  return kTwoPi * coupling_scale(model) * band_shape(model, omega);
}

double decay_rate(const ReservoirModel& model, double omega) {
  return omega > 0.0 ? 0.5 * spectral_density(model, omega) : 0.0;
}

double occupation(double theta, double omega, double omega0) {
  if (!(omega > 0.0)) throw DomainError("occupation: omega must be > 0");
  if (theta == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / (theta * omega0));
}

std::complex<double> kernel_g(const ReservoirModel& model, double t) {
  const double s = model.s;
  const double c = model.omega_c;
  const std::complex<double> base(1.0, c * t);
  return model.eta * c * c * std::tgamma(s + 1.0) * std::pow(base, -(s + 1.0));
}

std::complex<double> kernel_g_tilde(const ReservoirModel& model, double t, const Tolerances& tol) {
  if (model.theta == 0.0 || model.eta == 0.0) return {0.0, 0.0};
  const double s = model.s;
  const double c = model.omega_c;
  const double thermal_energy = model.theta * model.omega0;

  const std::complex<double> singular =
      model.eta * thermal_energy * c * std::tgamma(s) * std::pow(std::complex<double>(1.0, c * t), -s);

  auto remainder = [&](double omega) -> std::complex<double> {
    if (omega == 0.0) return {0.0, 0.0};
    const double weight = band_shape(model, omega) * occupation_remainder(thermal_energy, omega);
    return weight * std::polar(1.0, -omega * t);
  };
  const double scale = coupling_scale(model);
  // The remainder is a small correction to |singular(0)|; bound its error relative to that.
  const double singular_scale = model.eta * thermal_energy * c * std::tgamma(s);
  const double abs_target = std::min(tol.abs, 1e-3 * tol.rel * singular_scale) / scale;
  const auto r = quad::integrate(remainder, 0.0, kCutoffMultiple * c, {abs_target, 1e-3 * tol.rel}, 20000);
  if (!r.converged) throw ConvergenceError("kernel_g_tilde: remainder quadrature failed", r.error * scale);
  return singular + scale * r.value;
}

std::complex<double> kernel_g_tilde_series(const ReservoirModel& model, double t) {
  if (model.theta == 0.0 || model.eta == 0.0) return {0.0, 0.0};
  const double s = model.s;
  const double thermal_energy = model.theta * model.omega0;
  const std::complex<double> q(1.0 + thermal_energy / model.omega_c, thermal_energy * t);
  return coupling_scale(model) * std::tgamma(s + 1.0) * std::pow(thermal_energy, s + 1.0) *
         special::hurwitz_zeta(s + 1.0, q);
}

KernelSample sample_kernels(const ReservoirModel& model, double t) {
  return {t, kernel_g(model, t), kernel_g_tilde(model, t)};
}

Eigen::VectorXcd tabulate_g(const ReservoirModel& model, double dt, Eigen::Index n) {
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = kernel_g(model, static_cast<double>(k) * dt);
  return out;
}

Eigen::VectorXcd tabulate_g_tilde(const ReservoirModel& model, double dt, Eigen::Index n) {
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = kernel_g_tilde_series(model, static_cast<double>(k) * dt);
  return out;
}

double shift_below_band(const ReservoirModel& model, double log_depth) {
  return -coupling_scale(model) * below_band_integral(model, log_depth);
}

double self_energy_shift(const ReservoirModel& model, double omega, const Tolerances& tol) {
  if (model.eta == 0.0) return 0.0;
  if (omega < 0.0) return shift_below_band(model, -std::log(-omega));
  if (omega == 0.0) return -model.eta * model.omega_c * std::tgamma(model.s);

  // P int f(x)/(w - x) dx with f = band_shape. Subtract f(w) on the symmetric
  // window [0, 2w]; the analytic term f(w) ln(w / (X - w)) vanishes for X = 2w.
  const double fw = band_shape(model, omega);
  const double window = 2.0 * omega;
  const Tolerances inner{tol.abs / coupling_scale(model) / 3.0, tol.rel};

  // [0, w] with x = w e^y.
  auto lower = [&](double y) {
    const double ey = std::exp(y);
    return (band_shape(model, omega * ey) - fw) / (1.0 - ey) * ey;
  };
  // [w, 2w] direct.
  auto middle = [&](double x) { return (band_shape(model, x) - fw) / (omega - x); };
  // [2w, inf) with x = e^y.
  auto tail = [&](double y) {
    const double x = std::exp(y);
    return band_shape(model, x) * x / (omega - x);
  };

  const auto r1 = quad::integrate(lower, -60.0, 0.0, inner);
  const auto r2 = quad::integrate(middle, omega, window, inner);
  const double upper = std::log(window + kCutoffMultiple * model.omega_c);
  const auto r3 = quad::integrate(tail, std::log(window), upper, inner);
  const double log_term = fw * std::log(omega / (window - omega));
  const double error = r1.error + r2.error + r3.error;
  if (!(r1.converged && r2.converged && r3.converged))
    throw ConvergenceError("self_energy_shift: principal value quadrature failed", error * coupling_scale(model));
  return coupling_scale(model) * (r1.value + r2.value + r3.value + log_term);
}

LocalizedMode find_localized_mode(const ReservoirModel& model) {
  model.validate();
  LocalizedMode mode;
  if (model.eta == 0.0) return mode;

  const double w0 = model.omega0;
  const double shift_at_edge = -model.eta * model.omega_c * std::tgamma(model.s);
  if (-w0 - shift_at_edge <= 0.0) return mode;

  // F(L) = w - w0 - Delta(w) with w = -exp(-L); increasing in L.
  auto F = [&](double L) { return -std::exp(-L) - w0 - shift_below_band(model, L); };

  double lo = -std::log(w0 - shift_at_edge + 1.0);
  double f_lo = F(lo);
  double hi = lo + 1.0;
  double f_hi = F(hi);
  for (double step = 2.0; f_hi <= 0.0; step *= 2.0) {
    if (hi > 1e9) throw ConvergenceError("find_localized_mode: could not bracket root", std::abs(f_hi));
    lo = hi;
    f_lo = f_hi;
    hi += step;
    f_hi = F(hi);
  }
  if (f_lo >= 0.0) throw ConvergenceError("find_localized_mode: invalid bracket", f_lo);

  // Illinois-modified regula falsi, guarded by bisection.
  const double target = 1e-12 * w0;
  double root = hi, f_root = f_hi;
  int side = 0;
  for (int iter = 0; iter < 500; ++iter) {
    double candidate = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(candidate > lo && candidate < hi)) candidate = 0.5 * (lo + hi);
    const double f_candidate = F(candidate);
    root = candidate;
    f_root = f_candidate;
    if (std::abs(f_candidate) < target) break;
    if (f_candidate < 0.0) {
      lo = candidate;
      f_lo = f_candidate;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = candidate;
      f_hi = f_candidate;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) break;
  }
  if (!(std::abs(f_root) < target))
    throw ConvergenceError("find_localized_mode: refinement did not reach |F| < 1e-12", std::abs(f_root));

  // Delta'(w_b) = (dDelta/dL) / a with a = |w_b|; Z = 1 / (1 - Delta').
  const double h = 1e-5 * std::max(1.0, std::abs(root));
  const double dshift_dL = (shift_below_band(model, root + h) - shift_below_band(model, root - h)) / (2.0 * h);
  // ln Z = -ln(1 - dshift_dL * e^L); dshift_dL < 0.
  const double log_slope = std::log(std::max(-dshift_dL, std::numeric_limits<double>::min()));

  mode.exists = true;
  mode.log_abs_omega_b = -root;
  mode.omega_b = -std::exp(-root);
  mode.log_residue_z = -special::softplus(root + log_slope);
  mode.residue_z = std::exp(mode.log_residue_z);
  mode.residual = std::abs(f_root);
  return mode;
}

}  // namespace flicker
