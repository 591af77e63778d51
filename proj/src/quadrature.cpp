#include "sslhs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sslhs {

namespace {

// (P_n(x), P_{n-1}(x)) via the Bonnet recurrence.
std::pair<double, double> legendre_pair(std::size_t n, double x) {
  double prev = 1.0;
  double cur = x;
  for (std::size_t j = 2; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    const double next = ((2.0 * jj - 1.0) * x * cur - (jj - 1.0) * prev) / jj;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double legendre_derivative(std::size_t n, double x) {
  const auto [pn, pnm1] = legendre_pair(n, x);
  return static_cast<double>(n) * (x * pn - pnm1) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre_pair(n, x).first / legendre_derivative(n, x);
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    if (n % 2 == 1 && i == n / 2) x = 0.0;
    const double dp = legendre_derivative(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureRule gauss_legendre_uniform(std::size_t n, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("gauss_legendre_uniform: need a < b");
  QuadratureRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= 0.5;
  }
  return rule;
}

}  // namespace sslhs
