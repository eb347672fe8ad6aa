#include "flicker/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "flicker/quadrature.hpp"
#include "flicker/spectral.hpp"

namespace flicker {

SpectrumPoint s_exact(const ReservoirModel& model, double omega, double n0) {
  if (!(omega > 0.0)) throw DomainError("s_exact: omega must be > 0");
  SpectrumPoint p;
  const auto mode = find_localized_mode(model);
  if (mode.exists) {
    if (omega == mode.omega_b) throw DomainError("s_exact: omega coincides with the localized mode");
    p.delta_weight = std::exp(2.0 * mode.log_residue_z) * n0;
  }
  if (model.theta == 0.0 || model.eta == 0.0) return p;

  const double j = spectral_density(model, omega);
  const double n = occupation(model.theta, omega, model.omega0);
  const double gamma = 0.5 * j;
  const double detuning = omega - model.omega0 - self_energy_shift(model, omega);
  p.s2 = j * n / (detuning * detuning + gamma * gamma);
  if (mode.exists) {
    // Z^2 in log form: Z underflows for deep modes.
    const double log_s1 = 2.0 * mode.log_residue_z + std::log(j * n) - 2.0 * std::log(omega - mode.omega_b);
    p.s1 = std::exp(log_s1);
  }
  return p;
}

SpectrumSeries spectrum_series(const ReservoirModel& model, const Eigen::VectorXd& omegas, double n0) {
  SpectrumSeries series;
  series.omegas = omegas;
  series.initial_occupation = n0;
  series.s1_values.resize(omegas.size());
  series.s2_values.resize(omegas.size());
  for (Eigen::Index k = 0; k < omegas.size(); ++k) {
    const auto p = s_exact(model, omegas[k], n0);
    series.s1_values[k] = p.s1;
    series.s2_values[k] = p.s2;
    series.delta_weight = p.delta_weight;
  }
  series.values = series.s1_values + series.s2_values;
  const auto mode = find_localized_mode(model);
  series.delta_location = mode.exists ? mode.omega_b : 0.0;
  return series;
}

double s_low_freq(const ReservoirModel& model, double omega) {
  if (!(omega > 0.0)) throw DomainError("s_low_freq: omega must be > 0");
  const double eta_prime = model.eta * std::pow(model.omega_c, 1.0 - model.s) / (model.omega0 * model.omega0);
  return 2.0 * std::numbers::pi * eta_prime * model.theta * model.omega0 / std::pow(omega, model.x());
}

double correction_term(const ReservoirModel& model, double omega) {
  if (!(omega >= 0.0)) throw DomainError("correction_term: omega must be >= 0");
  const double gamma = decay_rate(model, omega);
  const double r2 = model.omega0 * model.omega0 + gamma * gamma;
  return 2.0 * model.omega0 * (omega - self_energy_shift(model, omega)) / r2;
}

Eigen::MatrixXd validity_map(const ReservoirModel& model, const Eigen::VectorXd& etas, const Eigen::VectorXd& omegas) {
  Eigen::MatrixXd map(etas.size(), omegas.size());
  for (Eigen::Index i = 0; i < etas.size(); ++i) {
    ReservoirModel m = model;
    m.eta = etas[i];
    for (Eigen::Index j = 0; j < omegas.size(); ++j) map(i, j) = std::abs(correction_term(m, omegas[j]));
  }
  return map;
}

PowerLawFit fit_power_law(const Eigen::VectorXd& omegas, const Eigen::VectorXd& values, double omega_min,
                          double omega_max) {
  if (omegas.size() != values.size()) throw DomainError("fit_power_law: omegas and values differ in length");
  std::vector<double> lx, ly;
  for (Eigen::Index k = 0; k < omegas.size(); ++k) {
    if (omegas[k] < omega_min || omegas[k] > omega_max) continue;
    if (!(values[k] > 0.0) || !(omegas[k] > 0.0)) throw DomainError("fit_power_law: non-positive sample in range");
    lx.push_back(std::log(omegas[k]));
    ly.push_back(std::log(values[k]));
  }
  if (lx.size() < 8) throw DomainError("fit_power_law: fewer than 8 samples in range");

  const auto n = static_cast<Eigen::Index>(lx.size());
  const Eigen::Map<const Eigen::VectorXd> x(lx.data(), n), y(ly.data(), n);
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  const double syy = (y.array() - my).square().sum();
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double ss_res = (y.array() - intercept - slope * x.array()).square().sum();

  PowerLawFit fit;
  fit.exponent = -slope;
  fit.prefactor = std::exp(intercept);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.omega_min = omega_min;
  fit.omega_max = omega_max;
  fit.samples = static_cast<int>(n);
  return fit;
}

PowerLawFit fit_power_law(const SpectrumSeries& series, double omega_min, double omega_max) {
  return fit_power_law(series.omegas, series.values, omega_min, omega_max);
}

double classical_rtn_spectrum(double nu, double omega) {
  if (!(nu > 0.0)) throw DomainError("classical_rtn_spectrum: nu must be > 0");
  return nu / (std::numbers::pi * (omega * omega + nu * nu));
}

double classical_ensemble_spectrum(double alpha, double nu1, double nu2, double omega, const Tolerances& tol) {
  if (!(alpha > 0.0)) throw DomainError("classical_ensemble_spectrum: alpha must be > 0");
  if (!(nu1 > 0.0) || !(nu2 >= nu1)) throw DomainError("classical_ensemble_spectrum: need 0 < nu1 <= nu2");
  if (nu2 == nu1) return classical_rtn_spectrum(nu1, omega);

  // 1/int nu^-alpha dnu, written with expm1 so narrow ranges keep their digits.
  const double span = std::log(nu2 / nu1);
  const double norm = std::abs(alpha - 1.0) < 1e-12
                          ? 1.0 / span
                          : (1.0 - alpha) / (std::pow(nu1, 1.0 - alpha) * std::expm1((1.0 - alpha) * span));
  // In y = ln nu: dnu p(nu) = norm nu^(1 - alpha) dy.
  auto integrand = [&](double y) {
    const double nu = std::exp(y);
    return classical_rtn_spectrum(nu, omega) * std::pow(nu, 1.0 - alpha);
  };
  const auto r = quad::integrate(integrand, std::log(nu1), std::log(nu2), {tol.abs * 1e-6, tol.rel});
  if (!r.converged) throw ConvergenceError("classical_ensemble_spectrum: quadrature failed", r.error);
  return norm * r.value;
}

Eigen::VectorXd one_sided_fourier(const Eigen::VectorXcd& correlation, double dt, const Eigen::VectorXd& omegas) {
  if (correlation.size() < 2) throw DomainError("one_sided_fourier: need at least two samples");
  const Eigen::Index last = correlation.size() - 1;
  Eigen::VectorXd out(omegas.size());
  for (Eigen::Index i = 0; i < omegas.size(); ++i) {
    const std::complex<double> step = std::polar(1.0, -omegas[i] * dt);
    std::complex<double> phase = 1.0, sum = 0.0;
    for (Eigen::Index m = 0; m <= last; ++m) {
      if (m % 256 == 0) phase = std::polar(1.0, -omegas[i] * dt * static_cast<double>(m));
      const double w = (m == 0 || m == last) ? 0.5 : 1.0;
      sum += w * phase * correlation[m];
      phase *= step;
    }
    out[i] = 2.0 * dt * sum.real();
  }
  return out;
}

}  // namespace flicker
