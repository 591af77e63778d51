#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sslhs/sampling.hpp"
#include "sslhs/stratification.hpp"

namespace sslhs {

/// Orthonormal polynomials for the uniform probability density on [a, b],
/// described by the monic three-term recurrence
///
///   pi_{j+1}(y) = (y - alpha_j) pi_j(y) - beta_j pi_{j-1}(y),
///
/// with beta_0 the total mass of the density. Evaluation works on the
/// affinely mapped coordinate t = (2y - a - b) / (b - a) in [-1, 1].
class Basis1D {
 public:
  /// `alpha` and `beta` hold max_degree + 1 entries each.
  Basis1D(double a, double b, std::vector<double> alpha, std::vector<double> beta);

  double lower() const { return a_; }
  double upper() const { return b_; }
  std::size_t max_degree() const { return alpha_.size() - 1; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }

  /// Writes psi_0(y), ..., psi_{out.size()-1}(y); out.size() <= max_degree + 1.
  void evaluate(double y, std::span<double> out) const;
  double evaluate(std::size_t degree, double y) const;

 private:
  double a_;
  double b_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  // Recurrence in the mapped coordinate.
  std::vector<double> ref_alpha_;
  std::vector<double> ref_sqrt_beta_;
};

/// Rescaled Legendre recurrence (closed form). Throws std::invalid_argument
/// for a degenerate interval.
Basis1D legendre_basis(double a, double b, std::size_t max_degree);

/// Discretised Stieltjes procedure with a `quadrature_order`-point
/// Gauss-Legendre rule. Throws std::invalid_argument if the rule cannot
/// integrate the required products exactly (quadrature_order <= max_degree).
Basis1D stieltjes_basis(double a, double b, std::size_t max_degree, std::size_t quadrature_order);

/// Downward-closed set of multi-indices; the zero index always comes first.
class MultiIndexSet {
 public:
  MultiIndexSet() = default;

  /// Throws std::invalid_argument unless the set contains zero, is downward
  /// closed and has no duplicates.
  MultiIndexSet(std::size_t dim, std::vector<std::vector<int>> indices);

  /// All m with |m|_1 <= degree, ordered by total degree then
  /// lexicographically (largest first).
  static MultiIndexSet total_degree(std::size_t dim, std::size_t degree);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<int>& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<std::vector<int>>& indices() const { return indices_; }
  std::size_t max_degree() const;
  /// Largest single-coordinate degree.
  std::size_t max_component() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<int>> indices_;
};

/// Binomial C(n, k), saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

/// Total-degree set with the largest p such that C(p + d, d) < budget.
/// When budget <= d + 1 only the constant fits; the result then has
/// max_degree() == 0 and callers should treat the surrogate as degenerate.
/// Throws std::invalid_argument for d == 0 or budget < 2.
MultiIndexSet total_degree_index_set(std::size_t dim, std::size_t budget);

enum class BasisConstruction { Stieltjes, Legendre };

/// Local gPC expansion f(y) ~ sum_m c_m prod_k psi_{k,m_k}(y_k) on one stratum.
struct GpcSurrogate {
  StratumId stratum_id = 0;
  HyperRectangle rect;
  MultiIndexSet indices;
  std::vector<double> coefficients;
  std::vector<Basis1D> bases;
  bool rank_deficient = false;

  /// Mean of the surrogate over the stratum (zero-index coefficient).
  double mean() const { return coefficients.front(); }
};

/// Per-dimension bases for `rect` up to `max_degree`.
std::vector<Basis1D> local_bases(const HyperRectangle& rect, std::size_t max_degree,
                                 BasisConstruction how = BasisConstruction::Stieltjes);

/// Throws std::invalid_argument if `point` lies outside `rect`.
double evaluate_surrogate(const GpcSurrogate& surrogate, const HyperRectangle& rect,
                          std::span<const double> point);

/// Least-squares fit of the expansion to (batch, values) through a complete
/// orthogonal decomposition of the design matrix; a rank-deficient design
/// yields the minimum-norm solution and sets rank_deficient. Throws
/// std::invalid_argument on non-finite values or size mismatches.
GpcSurrogate fit_gpc(const SampleBatch& batch, std::span<const double> values,
                     const HyperRectangle& rect, const MultiIndexSet& indices,
                     BasisConstruction how = BasisConstruction::Stieltjes);

}  // namespace sslhs
