#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "flicker/model.hpp"

namespace flicker {

/// Dissipationless bound state below the reservoir band.
///
/// For weak coupling and s -> 0 the root sits exponentially close to zero
/// frequency (|omega_b| ~ exp(-1/(eta s))), far below the smallest double, so the
/// root and the residue are carried in log form as well. omega_b and residue_z
/// then underflow to -0 and 0 while the log fields stay exact.
struct LocalizedMode {
  bool exists = false;
  double omega_b = 0.0;
  double residue_z = 0.0;
  double log_abs_omega_b = 0.0;  // ln|omega_b|, meaningful only when exists
  double log_residue_z = -std::numeric_limits<double>::infinity();
  double residual = 0.0;  // |omega_b - omega0 - Delta(omega_b)| at the returned root
};

struct KernelSample {
  double t = 0.0;
  std::complex<double> g;
  std::complex<double> g_tilde;
};

// J(w) = 2 pi eta w (w/wc)^(s-1) exp(-w/wc); throws DomainError for w < 0.
double spectral_density(const ReservoirModel& model, double omega);

// gamma(w) = J(w)/2, the imaginary part of the self-energy on the band.
double decay_rate(const ReservoirModel& model, double omega);

// Bose occupation 1/(exp(w/(theta w0)) - 1); zero at theta = 0.
double occupation(double theta, double omega, double omega0 = 1.0);

// g(t) = int dw/2pi J(w) e^{-iwt} = eta wc^2 Gamma(s+1) / (1 + i wc t)^(s+1).
std::complex<double> kernel_g(const ReservoirModel& model, double t);

// g~(t) = int dw/2pi J(w) n(w) e^{-iwt}. The theta/w part of n(w) is integrated
// in closed form; the bounded remainder by adaptive quadrature.
std::complex<double> kernel_g_tilde(const ReservoirModel& model, double t, const Tolerances& tol = {});

// Same kernel through its Hurwitz-zeta representation (term-wise integration of
// n(w) = sum_k exp(-k w / (theta w0))).
std::complex<double> kernel_g_tilde_series(const ReservoirModel& model, double t);

KernelSample sample_kernels(const ReservoirModel& model, double t);

// Kernels on lags 0, dt, ..., (n-1) dt.
Eigen::VectorXcd tabulate_g(const ReservoirModel& model, double dt, Eigen::Index n);
Eigen::VectorXcd tabulate_g_tilde(const ReservoirModel& model, double dt, Eigen::Index n);

// Delta(w) = P int_0^inf dw'/2pi J(w') / (w - w'). Principal value on the band by
// singularity subtraction; closed form below the band.
double self_energy_shift(const ReservoirModel& model, double omega, const Tolerances& tol = {});

// Delta(-exp(-log_depth)) for a frequency below the band given through
// log_depth = -ln|w|. Accepts depths whose frequency underflows a double.
double shift_below_band(const ReservoirModel& model, double log_depth);

// Root of w - w0 - Delta(w) on w < 0 and its residue Z = 1/(1 - Delta'(w_b)).
LocalizedMode find_localized_mode(const ReservoirModel& model);

}  // namespace flicker
