#pragma once

#include <vector>

#include <Eigen/Dense>

#include "flicker/model.hpp"

namespace flicker {

// S(w) = S1(w) + S2(w) sampled on a grid. The delta-peak of the localized
// mode is not sampled; its weight Z^2 n0 and location w_b are kept apart.
struct SpectrumSeries {
  Eigen::VectorXd omegas;
  Eigen::VectorXd values;     // s1_values + s2_values
  Eigen::VectorXd s1_values;  // localized-mode continuum part
  Eigen::VectorXd s2_values;  // environment part
  double initial_occupation = 0.0;
  double delta_weight = 0.0;
  double delta_location = 0.0;
};

struct SpectrumPoint {
  double s1 = 0.0;
  double s2 = 0.0;
  double delta_weight = 0.0;
};

struct PowerLawFit {
  double exponent = 0.0;   // x in S = A / w^x
  double prefactor = 0.0;  // A
  double r_squared = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
  int samples = 0;
};

// S1 = Z^2 J n / (w - w_b)^2 (zero without a localized mode),
// S2 = J n / ((w - w0 - Delta)^2 + gamma^2), delta weight Z^2 n0.
// Throws DomainError for w <= 0 or w = w_b.
SpectrumPoint s_exact(const ReservoirModel& model, double omega, double n0 = 0.0);

SpectrumSeries spectrum_series(const ReservoirModel& model, const Eigen::VectorXd& omegas, double n0 = 0.0);

// Low-frequency limit 2 pi eta' theta w0 / w^x with eta' = eta wc^(1-s) / w0^2.
double s_low_freq(const ReservoirModel& model, double omega);

// First-order term 2 xi zeta, xi = w0 / r, zeta = (w - Delta(w)) / r, r = sqrt(w0^2 + gamma^2).
double correction_term(const ReservoirModel& model, double omega);

// |2 xi zeta| on etas (rows) x omegas (columns); the model supplies s, wc, w0.
Eigen::MatrixXd validity_map(const ReservoirModel& model, const Eigen::VectorXd& etas, const Eigen::VectorXd& omegas);

// Ordinary least squares of log S against log w over samples inside [omega_min, omega_max].
PowerLawFit fit_power_law(const Eigen::VectorXd& omegas, const Eigen::VectorXd& values, double omega_min,
                          double omega_max);
PowerLawFit fit_power_law(const SpectrumSeries& series, double omega_min, double omega_max);

// Lorentzian (1/pi) nu / (w^2 + nu^2) of a random telegraph signal with switching rate nu.
double classical_rtn_spectrum(double nu, double omega);

// Lorentzians averaged over p(nu) ~ nu^-alpha on [nu1, nu2] (normalized analytically).
double classical_ensemble_spectrum(double alpha, double nu1, double nu2, double omega, const Tolerances& tol = {});

// 2 Re int_0^{tau_max} e^{-i w tau} c(tau) dtau by the trapezoid rule, c sampled at tau = m dt.
Eigen::VectorXd one_sided_fourier(const Eigen::VectorXcd& correlation, double dt, const Eigen::VectorXd& omegas);

}  // namespace flicker
