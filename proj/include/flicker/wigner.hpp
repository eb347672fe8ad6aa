#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flicker/greens.hpp"

namespace flicker {

// (|n> + |m>)/sqrt(2).
struct SuperpositionState {
  int n = 0;
  int m = 3;

  void validate() const;
  std::string label() const;
};

// Square sampling grid for z = x + i y. With auto_extent the half-width grows
// to hold a broad thermal Gaussian: max(extent, |u| sqrt(2 max(n,m) + 1) + 8 sigma).
struct WignerGridSpec {
  int points = 256;
  double extent = 5.0;
  bool auto_extent = true;
};

// values(i, j) = W(re_grid[i] + i im_grid[j]); normalization is the trapezoid
// integral over d^2z = dx dy.
struct WignerField {
  Eigen::VectorXd re_grid;
  Eigen::VectorXd im_grid;
  Eigen::MatrixXd values;
  double time = 0.0;
  std::string state_label;
  double normalization = 0.0;
};

// Omega(t) = 2 / (1 + 2 v).
double omega_factor(double v);

// (Omega/pi) exp(-Omega |z|^2): the evolved vacuum, unit integral over dx dy.
double w_vacuum(std::complex<double> z, std::complex<double> u, double v);

// W_n^n = W_0^0 sum_p n! / (p! ((n-p)!)^2) (|u|^2 Omega^2 |z|^2)^(n-p) (1 - |u|^2 Omega)^p.
double w_fock_diagonal(int n, std::complex<double> z, std::complex<double> u, double v);

// Interference part of (|n> + |m>)/sqrt(2); the two mutually conjugate sums are added.
double w_interference(const SuperpositionState& state, std::complex<double> z, std::complex<double> u, double v);

// (W_n^n + W_m^m)/2 + interference.
double w_superposition(const SuperpositionState& state, std::complex<double> z, std::complex<double> u, double v);

// Kernel T(z, t | a, b) with b = conj(alpha0'): W_0^0 exp(z* Omega u a + z Omega u* b + (1 - |u|^2 Omega) a b).
// For rho = |beta><beta| (normalized coherent state), W = exp(-|beta|^2) T(z | beta, conj(beta)).
std::complex<double> propagating_kernel(std::complex<double> z, std::complex<double> u, double v,
                                        std::complex<double> alpha0, std::complex<double> alpha0p_conj);

// Half-width used for a field with the given u, v.
double wigner_extent(const SuperpositionState& state, std::complex<double> u, double v, const WignerGridSpec& spec);

// Field on a square grid of half-width `extent`.
WignerField wigner_field(const SuperpositionState& state, std::complex<double> u, double v, double time, double extent,
                         int points);

// Trapezoid integral of a field over dx dy.
double field_integral(const WignerField& field);

// One field per requested time; u and v linearly interpolated on the solution grid.
std::vector<WignerField> snapshot_series(const SuperpositionState& state, const GreensSolution& solution,
                                         const std::vector<double>& times, const WignerGridSpec& spec = {});

// Linear interpolation of u and v at time t; throws DomainError outside the grid.
std::pair<std::complex<double>, double> interpolate_uv(const GreensSolution& solution, double t);

}  // namespace flicker
