#pragma once

#include <complex>

namespace flicker::special {

// exp(z) * z^(-a) * Gamma(a, z) for z >= 1 and any real a, by the Legendre
// continued fraction (modified Lentz).
double upper_gamma_scaled(double a, double z);

// Hurwitz zeta(sigma, q) = sum_{k>=0} (q + k)^(-sigma) for real sigma > 1 and
// Re q > 0, by Euler-Maclaurin summation.
std::complex<double> hurwitz_zeta(double sigma, std::complex<double> q);

// log(1 + exp(x)) without overflow.
double softplus(double x);

}  // namespace flicker::special
