#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "flicker/spectral.hpp"

using namespace flicker;
using std::numbers::pi;

namespace {

ReservoirModel model_x(double eta, double x, double theta = 0.654) {
  return ReservoirModel::from_x(eta, x, 1.0, 1.0, theta);
}

const std::vector<double> kPresetX = {0.25, 0.5, 0.75, 0.9999};

// Independent route: Fourier integral of J(w)/2pi with Boost quadrature.
std::complex<double> g_by_quadrature(const ReservoirModel& m, double t) {
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double w) { return spectral_density(m, w) / (2 * pi) * std::cos(w * t); };
  auto im = [&](double w) { return -spectral_density(m, w) / (2 * pi) * std::sin(w * t); };
  // [0, 1] carries the w^s endpoint singularity: tanh-sinh there, Kronrod elsewhere.
  boost::math::quadrature::tanh_sinh<double> ts(12);
  double r = ts.integrate(re, 0.0, 1.0, 1e-14);
  double i = ts.integrate(im, 0.0, 1.0, 1e-14);
  for (double a = 1.0; a < 60.0; a += 1.0) {
    r += gauss_kronrod<double, 61>::integrate(re, a, a + 1.0, 8, 1e-13);
    i += gauss_kronrod<double, 61>::integrate(im, a, a + 1.0, 8, 1e-13);
  }
  return {r, i};
}

// Independent route for g~(t): tanh-sinh on the full (endpoint-singular) integrand.
std::complex<double> g_tilde_by_tanh_sinh(const ReservoirModel& m, double t) {
  boost::math::quadrature::tanh_sinh<double> ts(15);
  auto integrand = [&](double w, bool imag) {
    if (w <= 0.0) return 0.0;
    const double weight = spectral_density(m, w) * occupation(m.theta, w) / (2 * pi);
    return imag ? -weight * std::sin(w * t) : weight * std::cos(w * t);
  };
  double re = 0.0, im = 0.0;
  for (double a = 0.0; a < 60.0; a += (a < 1.0 ? 1.0 : 5.0)) {
    const double b = std::min(60.0, a < 1.0 ? 1.0 : a + 5.0);
    re += ts.integrate([&](double w) { return integrand(w, false); }, a, b, 1e-14);
    im += ts.integrate([&](double w) { return integrand(w, true); }, a, b, 1e-14);
  }
  return {re, im};
}

// Closed form of the principal value for 0 < s < 1 (test oracle):
// Delta(w) = eta wc^(1-s) e^(-w/wc) [pi cot(pi s) w^s + Gamma(s+1) wc^s sum_k (w/wc)^k / (k!(k-s))].
double shift_closed_form(const ReservoirModel& m, double w) {
  const double y = w / m.omega_c;
  double series = 0.0, power = 1.0;
  for (int k = 0; k < 400; ++k) {
    series += power / (k - m.s);
    power *= y / (k + 1);
  }
  return m.eta * std::pow(m.omega_c, 1.0 - m.s) * std::exp(-y) *
         (pi / std::tan(pi * m.s) * std::pow(w, m.s) + std::tgamma(m.s + 1.0) * std::pow(m.omega_c, m.s) * series);
}

}  // namespace

TEST_CASE("spectral density") {
  const auto m = ReservoirModel{1e-3, 0.5, 1.0, 1.0, 0.0};
  CHECK(spectral_density(m, 0.0) == 0.0);
  CHECK(spectral_density(m, 1.0) == doctest::Approx(2 * pi * 1e-3 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(spectral_density(m, 1.0) == doctest::Approx(2.3115e-3).epsilon(1e-4));
  CHECK_THROWS_AS(spectral_density(m, -1.0), DomainError);

  // s = 1: eta w e^{-w/wc} peaks at wc.
  const auto ohmic = ReservoirModel{1e-3, 1.0, 1.0, 1.0, 0.0};
  double best_w = 0.0, best = -1.0;
  for (int k = 1; k < 4000; ++k) {
    const double w = 1e-3 * k;
    if (spectral_density(ohmic, w) > best) best = spectral_density(ohmic, w), best_w = w;
  }
  CHECK(best_w == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(decay_rate(m, 2.0) == doctest::Approx(0.5 * spectral_density(m, 2.0)));
}

TEST_CASE("bose occupation") {
  const double theta = 1.0 / std::log(2.0);
  CHECK(occupation(theta, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(occupation(0.0, 0.3) == 0.0);
  const double n = occupation(1.0, 1e-3);
  CHECK(n == doctest::Approx(999.5).epsilon(1e-6));
  CHECK(std::abs(n / 1000.0 - 1.0) < 1e-3);
  CHECK_THROWS_AS(occupation(1.0, 0.0), DomainError);
}

TEST_CASE("dissipation kernel g(t)") {
  for (double x : kPresetX) {
    const auto m = model_x(1e-3, x);
    CHECK(std::abs(kernel_g(m, 0.0) - std::tgamma(m.s + 1.0) * 1e-3) < 1e-18);
    const auto gp = kernel_g(m, 2.7);
    const auto gm = kernel_g(m, -2.7);
    CHECK(std::abs(gm - std::conj(gp)) < 1e-18);
  }
  const auto ohmic = ReservoirModel{1e-3, 1.0, 1.0, 1.0, 0.0};
  const std::complex<double> expected = 1e-3 / std::pow(std::complex<double>(1.0, 3.0), 2);
  CHECK(std::abs(kernel_g(ohmic, 3.0) - expected) < 1e-17);
}

TEST_CASE("closed-form g(t) agrees with quadrature on [0, 50]") {
  for (double x : {0.25, 0.5, 0.75}) {
    const auto m = model_x(1e-3, x);
    const double scale = std::abs(kernel_g(m, 0.0));
    double worst = 0.0;
    for (double t = 0.0; t <= 50.0; t += 2.5) worst = std::max(worst, std::abs(kernel_g(m, t) - g_by_quadrature(m, t)));
    CHECK(worst <= 1e-8 * scale);
  }
  // s = 1e-4: w^s has an almost-step at w = 0; tanh-sinh-free Kronrod still converges.
  const auto m = model_x(1e-3, 0.9999);
  const double scale = std::abs(kernel_g(m, 0.0));
  for (double t : {0.0, 1.0, 10.0, 50.0}) CHECK(std::abs(kernel_g(m, t) - g_by_quadrature(m, t)) <= 1e-8 * scale);
}

TEST_CASE("noise kernel g~(t)") {
  SUBCASE("vanishes at zero temperature") {
    const auto m = model_x(1e-3, 0.5, 0.0);
    CHECK(kernel_g_tilde(m, 0.0) == std::complex<double>(0.0, 0.0));
    CHECK(kernel_g_tilde(m, 5.0) == std::complex<double>(0.0, 0.0));
    CHECK(kernel_g_tilde_series(m, 5.0) == std::complex<double>(0.0, 0.0));
  }
  SUBCASE("frozen high-precision values") {
    // mpmath, 30 digits: direct quadrature and Hurwitz zeta agree to 1e-21.
    const auto m = model_x(1e-3, 0.5, 0.654);
    const auto g0 = kernel_g_tilde(m, 0.0);
    CHECK(g0.real() == doctest::Approx(8.54987376173660445e-4).epsilon(1e-9));
    CHECK(std::abs(g0.imag()) < 1e-15);
    const auto g3 = kernel_g_tilde(m, 3.0);
    CHECK(std::abs(g3 - std::complex<double>(5.42530218552040085e-4, -3.06368168601878554e-4)) < 1e-13);
  }
  SUBCASE("dual quadrature at t = 0") {
    const auto m = model_x(1e-3, 0.5, 0.654);
    const auto split = kernel_g_tilde(m, 0.0);
    const auto ts = g_tilde_by_tanh_sinh(m, 0.0);
    CHECK(split.real() > 0.0);
    CHECK(std::abs(split - ts) <= 1e-8 * std::abs(split));
  }
  SUBCASE("conjugate symmetry") {
    for (double x : kPresetX) {
      const auto m = model_x(1e-3, x);
      CHECK(std::abs(kernel_g_tilde(m, -1.3) - std::conj(kernel_g_tilde(m, 1.3))) <= 1e-12 * std::abs(kernel_g_tilde(m, 0.0)));
    }
  }
  SUBCASE("series representation matches the quadrature path") {
    for (double x : kPresetX) {
      for (double theta : {0.654, 3.27, 327.0}) {
        const auto m = model_x(1e-3, x, theta);
        const double scale = std::abs(kernel_g_tilde(m, 0.0));
        for (double t : {0.0, 0.5, 2.0, 7.0, 20.0}) {
          CHECK(std::abs(kernel_g_tilde(m, t) - kernel_g_tilde_series(m, t)) <= 1e-9 * scale);
        }
      }
    }
  }
}

TEST_CASE("tabulated kernels") {
  const auto m = model_x(1e-2, 0.5);
  const auto g = tabulate_g(m, 0.1, 5);
  const auto gt = tabulate_g_tilde(m, 0.1, 5);
  CHECK(g.size() == 5);
  CHECK(std::abs(g[3] - kernel_g(m, 0.3)) < 1e-18);
  CHECK(std::abs(gt[4] - kernel_g_tilde(m, 0.4)) < 1e-10 * std::abs(gt[0]));
  const auto sample = sample_kernels(m, 0.4);
  CHECK(sample.t == 0.4);
  CHECK(std::abs(sample.g - g[4]) < 1e-18);
}

TEST_CASE("self-energy shift") {
  SUBCASE("edge of the band") {
    for (double s : {0.25, 0.5, 0.75, 1.0}) {
      const auto m = ReservoirModel{1e-3, s, 1.0, 1.0, 0.0};
      CHECK(self_energy_shift(m, 0.0) == doctest::Approx(-1e-3 * std::tgamma(s)).epsilon(1e-14));
      CHECK(shift_below_band(m, 40.0) == doctest::Approx(-1e-3 * std::tgamma(s)).epsilon(1e-6));
    }
    const auto ohmic = ReservoirModel{1e-3, 1.0, 1.0, 1.0, 0.0};
    CHECK(self_energy_shift(ohmic, -1e-12) == doctest::Approx(-1e-3).epsilon(1e-9));
  }
  SUBCASE("below the band: frozen mpmath values and sign") {
    struct Case { double omega, s, expected; };
    const Case cases[] = {{-0.5, 0.5, -6.102921209853500296e-4},
                          {-3.0, 0.5, -2.089157237393699600e-4},
                          {-1e-3, 1e-4, -6.335420872472879921e-3},
                          {-2.0, 1.0, -2.773427662235548306e-4},
                          {-0.2, 0.75, -7.545290590439298665e-4}};
    for (const auto& c : cases) {
      const auto m = ReservoirModel{1e-3, c.s, 1.0, 1.0, 0.0};
      CHECK(self_energy_shift(m, c.omega) == doctest::Approx(c.expected).epsilon(1e-11));
    }
    const auto m = ReservoirModel{1e-3, 0.3, 1.0, 1.0, 0.0};
    for (double w = -20.0; w < 0.0; w += 0.7) CHECK(self_energy_shift(m, w) < 0.0);
  }
  SUBCASE("principal value on the band: frozen values") {
    const auto m = ReservoirModel{1e-3, 0.5, 1.0, 1.0, 0.0};
    CHECK(self_energy_shift(m, 0.01) == doctest::Approx(-1.73724015845369695e-3).epsilon(1e-9));
    CHECK(self_energy_shift(m, 1.0) == doctest::Approx(1.34988337336239205e-4).epsilon(1e-8));
    CHECK(self_energy_shift(m, 3.0) == doctest::Approx(4.63087852984469550e-4).epsilon(1e-8));
    const auto m75 = ReservoirModel{1e-3, 0.75, 1.0, 1.0, 0.0};
    CHECK(self_energy_shift(m75, 1.0) == doctest::Approx(-8.87306083399207638e-5).epsilon(1e-8));
  }
  SUBCASE("Kramers-Kronig: principal value equals the Hilbert transform of gamma = J/2") {
    for (double s : {0.25, 0.5, 0.75, 1e-4}) {
      const auto m = ReservoirModel{1e-3, s, 1.0, 1.0, 0.0};
      for (double w : {1e-5, 1e-3, 0.1, 0.5, 0.99, 1.0, 1.7, 4.0, 12.0}) {
        const double numeric = self_energy_shift(m, w);
        const double oracle = shift_closed_form(m, w);
        CHECK(std::abs(numeric - oracle) <= 1e-10 + 1e-7 * std::abs(oracle));
      }
    }
  }
  SUBCASE("linear in the coupling") {
    for (double x : kPresetX) {
      const auto m1 = model_x(1e-3, x);
      const auto m2 = model_x(2e-3, x);
      CHECK(std::abs(std::abs(kernel_g(m2, 0.0)) / 2.0 / std::abs(kernel_g(m1, 0.0)) - 1.0) < 1e-10);
      CHECK(std::abs(self_energy_shift(m2, 0.0) / 2.0 / self_energy_shift(m1, 0.0) - 1.0) < 1e-10);
      CHECK(std::abs(self_energy_shift(m2, -0.3) / 2.0 / self_energy_shift(m1, -0.3) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("localized mode") {
  CHECK_FALSE(find_localized_mode(ReservoirModel{0.0, 0.5, 1.0, 1.0, 0.0}).exists);
  CHECK(find_localized_mode(ReservoirModel{0.0, 0.5, 1.0, 1.0, 0.0}).residue_z == 0.0);
  CHECK_FALSE(find_localized_mode(ReservoirModel{1e-3, 0.5, 1.0, 1.0, 0.0}).exists);
  // F(0-) = -1 + 0.5 Gamma(1/2) < 0.
  CHECK_FALSE(find_localized_mode(ReservoirModel{0.5, 0.5, 1.0, 1.0, 0.0}).exists);

  SUBCASE("strong coupling root against mpmath") {
    const auto m = ReservoirModel{0.8, 0.5, 1.0, 1.0, 0.0};
    const auto mode = find_localized_mode(m);
    REQUIRE(mode.exists);
    CHECK(mode.omega_b == doctest::Approx(-0.03456853991981046285).epsilon(1e-10));
    CHECK(mode.residue_z == doctest::Approx(0.18145997386158847298).epsilon(1e-7));
    const double F = mode.omega_b - m.omega0 - self_energy_shift(m, mode.omega_b);
    CHECK(std::abs(F) < 1e-12);
    CHECK(mode.residue_z > 0.0);
    CHECK(mode.residue_z <= 1.0);
  }
  SUBCASE("1/f limit: root exponentially close to zero, residue underflows") {
    const auto m = model_x(1e-3, 0.9999);
    const auto mode = find_localized_mode(m);
    REQUIRE(mode.exists);
    CHECK(mode.residual < 1e-12);
    CHECK(mode.log_abs_omega_b < -700.0);
    CHECK(mode.log_residue_z < -700.0);
    CHECK(mode.residue_z == 0.0);
    // eta I(a) = 1 + a with I(a) ~ Gamma(s) - pi/sin(pi s) a^s for tiny a.
    const double s = m.s;
    const double a_pow_s = (std::tgamma(s) - 1.0 / 1e-3) * std::sin(pi * s) / pi;
    CHECK(mode.log_abs_omega_b == doctest::Approx(std::log(a_pow_s) / s).epsilon(1e-9));
  }
}
