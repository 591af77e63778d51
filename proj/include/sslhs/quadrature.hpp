#pragma once

#include <cstddef>
#include <vector>

namespace sslhs {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (weights sum to 2). Exact for
/// polynomials of degree <= 2n - 1.
QuadratureRule gauss_legendre(std::size_t n);

/// n-point Gauss-Legendre rule for the uniform probability density on [a, b]
/// (weights sum to 1).
QuadratureRule gauss_legendre_uniform(std::size_t n, double a, double b);

}  // namespace sslhs
