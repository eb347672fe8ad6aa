#include "flicker/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flicker::special {

double upper_gamma_scaled(double a, double z) {
  if (!(z >= 1.0)) throw std::domain_error("upper_gamma_scaled: continued fraction needs z >= 1");
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return h;
  }
  throw std::runtime_error("upper_gamma_scaled: continued fraction did not converge");
}

std::complex<double> hurwitz_zeta(double sigma, std::complex<double> q) {
  if (!(sigma > 1.0)) throw std::domain_error("hurwitz_zeta: sigma must be > 1");
  if (!(q.real() > 0.0)) throw std::domain_error("hurwitz_zeta: Re q must be > 0");
  // B_{2j} / (2j)!
  static constexpr std::array<double, 12> bernoulli_over_factorial = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
      7.0 / 6.0 / 87178291200.0,
      -3617.0 / 510.0 / 20922789888000.0,
      43867.0 / 798.0 / 6402373705728000.0,
      -174611.0 / 330.0 / 2432902008176640000.0,
      854513.0 / 138.0 / 1.1240007277776077e21,
      -236364091.0 / 2730.0 / 6.204484017332394e23};

  constexpr double kTailRadius = 25.0;
  const int n_direct = std::max(0, static_cast<int>(std::ceil(kTailRadius - std::abs(q))));
  std::complex<double> sum = 0.0;
  for (int k = 0; k < n_direct; ++k) sum += std::pow(q + static_cast<double>(k), -sigma);

  const std::complex<double> w = q + static_cast<double>(n_direct);
  const std::complex<double> w_pow = std::pow(w, -sigma);
  sum += w * w_pow / (sigma - 1.0) + 0.5 * w_pow;

  // sigma (sigma+1) ... (sigma+2j-2) * w^(-sigma-2j+1)
  std::complex<double> term = sigma * w_pow / w;
  const std::complex<double> inv_w2 = 1.0 / (w * w);
  for (std::size_t j = 0; j < bernoulli_over_factorial.size(); ++j) {
    const std::complex<double> contribution = bernoulli_over_factorial[j] * term;
    sum += contribution;
    if (std::abs(contribution) < 1e-17 * std::abs(sum)) break;
    const double k = 2.0 * j + 1.0;
    term *= (sigma + k) * (sigma + k + 1.0) * inv_w2;
  }
  return sum;
}

double softplus(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

}  // namespace flicker::special
