#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "flicker/greens.hpp"
#include "flicker/wigner.hpp"

namespace flicker {

// Finite bath: modes at geometric midpoints of log-spaced bins on [w_min, w_max],
// |V_k|^2 = J(w_k) dw_k / 2pi.
struct DiscreteBath {
  Eigen::VectorXd mode_freqs;
  Eigen::VectorXd couplings;  // real V_k
  Eigen::VectorXd widths;     // bin widths dw_k

  Eigen::Index size() const noexcept { return mode_freqs.size(); }
  // 2 pi / (mode spacing nearest `omega`); comparisons are meaningful only before it.
  double recurrence_time(double omega) const;
};

DiscreteBath make_discrete_bath(const ReservoirModel& model, Eigen::Index n_modes, double omega_min = 1e-6,
                                double omega_max = 10.0);

struct BathDynamics {
  std::vector<double> times;
  Eigen::VectorXcd u;
  Eigen::VectorXd v;
};

// Exact linear dynamics of the resonator plus N modes: u_N is the system-system
// propagator entry, v_N = sum_k n(w_k) |system-k entry|^2.
BathDynamics bath_u_v(const DiscreteBath& bath, const ReservoirModel& model, const std::vector<double>& times);

// v at grid index t_index by a plain double trapezoid sum with g~ from the
// quadrature route (no Hermitian folding, no Hurwitz tabulation).
double brute_force_v(const ReservoirModel& model, const Eigen::VectorXcd& u, const TimeGrid& grid,
                     Eigen::Index t_index);

struct TruncatedDensityMatrix {
  double time = 0.0;
  Eigen::MatrixXcd rho;
  double trace_error = 0.0;        // |tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;
  double leakage = 0.0;            // population of the top two levels
};

// Cutoff whose thermal tail (v/(1+v))^k beyond the initial photons stays below 1e-10
// for occupation up to v_max; never below n + m + 8.
int fock_cutoff(const SuperpositionState& state, double v_max);

// RK4 on the Fock-truncated master equation with step 2 dt so every stage falls
// on a grid sample of the coefficients. Snapshot times must be multiples of 2 dt
// from t0. Throws SolverError on trace drift or leakage above 1e-6.
std::vector<TruncatedDensityMatrix> integrate_master_equation(const MasterCoefficients& coeffs,
                                                              const SuperpositionState& state, int n_max,
                                                              const std::vector<double>& snapshot_times);

// W(z) = (2/pi) tr[rho D(z) P D(z)^dagger] = (2/pi) tr[rho D(2z) P], P the parity,
// from Laguerre matrix elements of the displacement. Square grid of half-width extent.
WignerField wigner_from_density_matrix(const TruncatedDensityMatrix& rho, double extent, int points);

// Single-point version.
double wigner_from_density_matrix(const Eigen::MatrixXcd& rho, std::complex<double> z);

// <k| D(beta) |j> for k, j < dim.
Eigen::MatrixXcd displacement_matrix(std::complex<double> beta, int dim);

}  // namespace flicker
