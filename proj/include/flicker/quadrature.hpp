#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <type_traits>
#include <vector>

#include "flicker/model.hpp"

namespace flicker::quad {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = false;
  int evaluations = 0;
  std::vector<double> partition;  // sorted breakpoints of the final subdivision
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
};

template <class T, class F>
Segment<T> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) on a finite interval. The worst segment
// is bisected until the summed error estimate meets max(abs, rel*|I|). The final
// sum runs left to right over the partition so results do not depend on the
// refinement history.
template <class F>
auto integrate(F&& f, double a, double b, const Tolerances& tol = {}, int max_segments = 4000)
    -> QuadResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  QuadResult<T> result;
  if (a == b) {
    result.converged = true;
    result.partition = {a, b};
    return result;
  }
  std::vector<detail::Segment<T>> segments;
  segments.push_back(detail::kronrod15<T>(f, a, b));
  int evaluations = 15;

  auto totals = [&segments]() {
    T value{};
    double error = 0.0;
    for (const auto& s : segments) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  while (error > std::max(tol.abs, tol.rel * detail::magnitude(value)) &&
         static_cast<int>(segments.size()) < max_segments) {
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const auto& l, const auto& r) { return l.error < r.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) break;  // interval no longer divisible
    const auto left = detail::kronrod15<T>(f, worst->a, mid);
    const auto right = detail::kronrod15<T>(f, mid, worst->b);
    evaluations += 30;
    *worst = left;
    segments.push_back(right);
    std::tie(value, error) = totals();
  }

  std::sort(segments.begin(), segments.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  std::tie(value, error) = totals();
  result.value = value;
  result.error = error;
  result.converged = error <= std::max(tol.abs, tol.rel * detail::magnitude(value));
  result.evaluations = evaluations;
  result.partition.reserve(segments.size() + 1);
  for (const auto& s : segments) result.partition.push_back(s.a);
  result.partition.push_back(segments.back().b);
  return result;
}

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int order);

// Composite rule: one Gauss-Legendre block per panel between consecutive breakpoints.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  auto apply(F&& f) const {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    T sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};
PanelRule make_panel_rule(std::span<const double> breakpoints, int order);

// Splits any panel wider than max_width into equal parts.
std::vector<double> limit_panel_width(std::span<const double> breakpoints, double max_width);

// Geometric breakpoints lo, lo*r, ..., hi with about per_decade points per decade.
std::vector<double> geometric_breakpoints(double lo, double hi, int per_decade);

}  // namespace flicker::quad
