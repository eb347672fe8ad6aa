#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace flicker {

// All quantities are dimensionless: frequencies in units of the resonator
// frequency, times in its inverse, temperature as theta = kB T / (hbar w0).

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Raised by solvers whose output violates a physical bound (|u| > 1, imaginary v, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-8;
};

// Ohmic-family reservoir J(w) = 2 pi eta w (w/wc)^(s-1) exp(-w/wc) coupled to a
// resonator of frequency omega0 at dimensionless temperature theta.
struct ReservoirModel {
  double eta = 1e-3;
  double s = 0.5;
  double omega_c = 1.0;
  double omega0 = 1.0;
  double theta = 0.0;

  double x() const noexcept { return 1.0 - s; }

  static ReservoirModel from_x(double eta, double x, double omega_c, double omega0, double theta) {
    return ReservoirModel{eta, 1.0 - x, omega_c, omega0, theta};
  }

  void validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("eta must be >= 0");
    if (!(s > 0.0) || !(s <= 1.0)) throw DomainError("exponent s = 1 - x must lie in (0, 1]");
    if (!(omega_c > 0.0)) throw DomainError("omega_c must be > 0");
    if (!(omega0 > 0.0)) throw DomainError("omega0 must be > 0");
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("theta must be >= 0");
  }
};

// kB T / (hbar w0) for T in kelvin and w0 as an angular frequency in rad/s.
inline constexpr double kBoltzmann = 1.380649e-23;      // J/K (exact, SI 2019)
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline double theta_from_kelvin(double kelvin, double omega0_rad_per_s) {
  return kBoltzmann * kelvin / (kHbar * omega0_rad_per_s);
}

}  // namespace flicker
