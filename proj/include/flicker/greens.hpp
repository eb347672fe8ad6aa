#pragma once

#include <Eigen/Dense>

#include "flicker/model.hpp"

namespace flicker {

// Samples t_k = t0 + k dt for k = 0..n_steps (n_steps + 1 points).
struct TimeGrid {
  double t0 = 0.0;
  double dt = 5e-3;
  Eigen::Index n_steps = 4000;

  Eigen::Index size() const noexcept { return n_steps + 1; }
  double time(Eigen::Index k) const noexcept { return t0 + static_cast<double>(k) * dt; }
  double horizon() const noexcept { return static_cast<double>(n_steps) * dt; }
  void validate() const;

  // Grid from t0 covering at least `horizon`.
  static TimeGrid covering(double horizon, double dt, double t0 = 0.0);
};

// 1e-3 for s <= 0.25 (kernel tail decays slowly), 5e-3 otherwise.
double default_dt(const ReservoirModel& model);

struct VolterraResult {
  Eigen::VectorXcd u;
  Eigen::VectorXd error;  // |u_dt - u_2dt| / 3 per sample
  double max_error = 0.0;
  bool unstable = false;  // |u| exceeded 1 + 1e-6 somewhere
};

struct SpectralResult {
  Eigen::VectorXcd u;
  double residue_z = 0.0;
  double sum_rule_deviation = 0.0;  // |Z + int A - 1|
  Eigen::Index nodes = 0;
};

struct GreensSolution {
  TimeGrid grid;
  Eigen::VectorXcd u;
  Eigen::VectorXd v;
  Eigen::VectorXd u_error;
  bool unstable = false;
};

// NaN where undefined (|u| below the division floor at a stencil point).
struct MasterCoefficients {
  TimeGrid grid;
  Eigen::VectorXd omega0_prime;
  Eigen::VectorXd gamma;
  Eigen::VectorXd gamma_tilde;
  Eigen::Array<bool, Eigen::Dynamic, 1> defined;
};

// du/dt + i w0 u + int_{t0}^t g(t - tau) u(tau) dtau = 0, u(t0) = 1.
// Implicit trapezoidal product integration in the frame rotating at w0; the
// linear implicit step is solved exactly. Error estimate from a 2 dt rerun.
VolterraResult solve_u_volterra(const ReservoirModel& model, const TimeGrid& grid);

// Localized-mode term plus the branch-cut integral of the spectral function,
// integrated on Gauss-Legendre panels built from an adaptive partition.
SpectralResult solve_u_spectral(const ReservoirModel& model, const TimeGrid& grid, const Tolerances& tol = {});

// v(t_k) = int int u(a) g~(b - a) u*(b) da db over [0, t_k - t0]^2, trapezoidal,
// O(n^2) total. Throws SolverError on a non-negligible imaginary residue.
Eigen::VectorXd compute_v(const ReservoirModel& model, const Eigen::VectorXcd& u, const TimeGrid& grid);

// v(t, t + tau) for t = t_{t_index} and tau = m dt, m = 0..max_lag, using
// u(t, tau1) = u(t - tau1). Entry 0 equals compute_v at t_index.
Eigen::VectorXcd compute_v_two_time(const ReservoirModel& model, const Eigen::VectorXcd& u, const TimeGrid& grid,
                                    Eigen::Index t_index, Eigen::Index max_lag);

// w0'(t) = -Im(du/dt / u), gamma = -Re(du/dt / u), gamma~ = dv/dt - 2 v Re(du/dt / u).
// du/dt / u is differentiated as d(log u)/dt from ratios of neighbouring samples,
// which is exact for pure exponentials.
MasterCoefficients master_coefficients(const Eigen::VectorXcd& u, const Eigen::VectorXd& v, const TimeGrid& grid,
                                       double division_floor = 1e-9);

// Volterra u plus v on one grid.
GreensSolution solve_greens(const ReservoirModel& model, const TimeGrid& grid);

}  // namespace flicker
