#include "flicker/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace flicker::quad {

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

PanelRule make_panel_rule(std::span<const double> breakpoints, int order) {
  const auto base = gauss_legendre(order);
  PanelRule rule;
  if (breakpoints.size() < 2) return rule;
  rule.nodes.reserve((breakpoints.size() - 1) * order);
  rule.weights.reserve((breakpoints.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(center + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

std::vector<double> limit_panel_width(std::span<const double> breakpoints, double max_width) {
  std::vector<double> out;
  if (breakpoints.empty()) return out;
  out.push_back(breakpoints.front());
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    for (int k = 1; k < pieces; ++k) out.push_back(a + (b - a) * k / pieces);
    out.push_back(b);
  }
  return out;
}

std::vector<double> geometric_breakpoints(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("geometric_breakpoints: need 0 < lo < hi");
  const int count = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
  std::vector<double> out(count + 1);
  for (int k = 0; k <= count; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / count);
  out.back() = hi;
  return out;
}

}  // namespace flicker::quad
