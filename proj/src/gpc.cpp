#include "sslhs/gpc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "sslhs/quadrature.hpp"

namespace sslhs {

Basis1D::Basis1D(double a, double b, std::vector<double> alpha, std::vector<double> beta)
    : a_(a), b_(b), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (!(a_ < b_)) throw std::invalid_argument("Basis1D: degenerate interval");
  if (alpha_.empty() || alpha_.size() != beta_.size()) {
    throw std::invalid_argument("Basis1D: recurrence coefficient size mismatch");
  }
  const double mid = 0.5 * (a_ + b_);
  const double scale = 2.0 / (b_ - a_);
  ref_alpha_.resize(alpha_.size());
  ref_sqrt_beta_.resize(beta_.size());
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    if (!(beta_[j] > 0.0)) throw std::invalid_argument("Basis1D: recurrence beta must be positive");
    ref_alpha_[j] = (alpha_[j] - mid) * scale;
    // beta_0 is a mass and does not scale with the coordinate.
    ref_sqrt_beta_[j] = j == 0 ? std::sqrt(beta_[0]) : std::sqrt(beta_[j]) * scale;
  }
}

void Basis1D::evaluate(double y, std::span<double> out) const {
  if (out.empty()) return;
  if (out.size() > alpha_.size()) throw std::out_of_range("Basis1D::evaluate: degree too high");
  const double t = (2.0 * y - a_ - b_) / (b_ - a_);
  out[0] = 1.0 / ref_sqrt_beta_[0];
  if (out.size() == 1) return;
  out[1] = (t - ref_alpha_[0]) * out[0] / ref_sqrt_beta_[1];
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    out[j + 1] = ((t - ref_alpha_[j]) * out[j] - ref_sqrt_beta_[j] * out[j - 1]) / ref_sqrt_beta_[j + 1];
  }
}

double Basis1D::evaluate(std::size_t degree, double y) const {
  std::vector<double> values(degree + 1);
  evaluate(y, values);
  return values.back();
}

Basis1D legendre_basis(double a, double b, std::size_t max_degree) {
  if (!(a < b)) throw std::invalid_argument("legendre_basis: degenerate interval");
  std::vector<double> alpha(max_degree + 1, 0.5 * (a + b));
  std::vector<double> beta(max_degree + 1, 1.0);
  const double half_sq = 0.25 * (b - a) * (b - a);
  for (std::size_t j = 1; j <= max_degree; ++j) {
    const double jj = static_cast<double>(j);
    beta[j] = half_sq * jj * jj / (4.0 * jj * jj - 1.0);
  }
  return Basis1D(a, b, std::move(alpha), std::move(beta));
}

Basis1D stieltjes_basis(double a, double b, std::size_t max_degree, std::size_t quadrature_order) {
  if (!(a < b)) throw std::invalid_argument("stieltjes_basis: degenerate interval");
  if (quadrature_order < max_degree + 1) {
    throw std::invalid_argument("stieltjes_basis: quadrature order must be at least max_degree + 1");
  }
  const QuadratureRule rule = gauss_legendre_uniform(quadrature_order, a, b);
  const std::size_t q = rule.nodes.size();
  // Work in the centred coordinate for accuracy; shift alpha back at the end.
  const double mid = 0.5 * (a + b);
  std::vector<double> x(q);
  for (std::size_t i = 0; i < q; ++i) x[i] = rule.nodes[i] - mid;

  std::vector<double> alpha(max_degree + 1);
  std::vector<double> beta(max_degree + 1);
  std::vector<double> prev(q, 0.0);
  std::vector<double> cur(q, 1.0);
  double norm_cur = 0.0;
  for (std::size_t i = 0; i < q; ++i) norm_cur += rule.weights[i];
  beta[0] = norm_cur;
  for (std::size_t j = 0; j <= max_degree; ++j) {
    double xnorm = 0.0;
    for (std::size_t i = 0; i < q; ++i) xnorm += rule.weights[i] * x[i] * cur[i] * cur[i];
    alpha[j] = xnorm / norm_cur;
    if (j == max_degree) break;
    std::vector<double> next(q);
    double norm_next = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      next[i] = (x[i] - alpha[j]) * cur[i] - (j == 0 ? 0.0 : beta[j]) * prev[i];
      norm_next += rule.weights[i] * next[i] * next[i];
    }
    beta[j + 1] = norm_next / norm_cur;
    prev = std::move(cur);
    cur = std::move(next);
    norm_cur = norm_next;
  }
  for (auto& al : alpha) al += mid;
  return Basis1D(a, b, std::move(alpha), std::move(beta));
}

MultiIndexSet::MultiIndexSet(std::size_t dim, std::vector<std::vector<int>> indices)
    : dim_(dim), indices_(std::move(indices)) {
  if (dim_ == 0) throw std::invalid_argument("MultiIndexSet: dimension must be positive");
  std::set<std::vector<int>> lookup;
  for (const auto& m : indices_) {
    if (m.size() != dim_) throw std::invalid_argument("MultiIndexSet: index length mismatch");
    for (int mk : m) {
      if (mk < 0) throw std::invalid_argument("MultiIndexSet: negative component");
    }
    if (!lookup.insert(m).second) throw std::invalid_argument("MultiIndexSet: duplicate index");
  }
  if (indices_.empty() || std::any_of(indices_.front().begin(), indices_.front().end(),
                                      [](int mk) { return mk != 0; })) {
    throw std::invalid_argument("MultiIndexSet: zero index must come first");
  }
  for (const auto& m : indices_) {
    for (std::size_t k = 0; k < dim_; ++k) {
      if (m[k] == 0) continue;
      auto down = m;
      --down[k];
      if (!lookup.contains(down)) throw std::invalid_argument("MultiIndexSet: not downward closed");
    }
  }
}

namespace {

void enumerate_degree(std::size_t dim, int remaining, std::size_t k, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (k + 1 == dim) {
    cur[k] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[k] = v;
    enumerate_degree(dim, remaining - v, k + 1, cur, out);
  }
  cur[k] = 0;
}

}  // namespace

MultiIndexSet MultiIndexSet::total_degree(std::size_t dim, std::size_t degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dim, 0);
  for (std::size_t p = 0; p <= degree; ++p) enumerate_degree(dim, static_cast<int>(p), 0, cur, out);
  return MultiIndexSet(dim, std::move(out));
}

std::size_t MultiIndexSet::max_degree() const {
  std::size_t best = 0;
  for (const auto& m : indices_) {
    std::size_t s = 0;
    for (int mk : m) s += static_cast<std::size_t>(mk);
    best = std::max(best, s);
  }
  return best;
}

std::size_t MultiIndexSet::max_component() const {
  int best = 0;
  for (const auto& m : indices_) best = std::max(best, *std::max_element(m.begin(), m.end()));
  return static_cast<std::size_t>(best);
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step.
    const std::size_t factor = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / factor) {
      return std::numeric_limits<std::size_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

MultiIndexSet total_degree_index_set(std::size_t dim, std::size_t budget) {
  if (dim == 0) throw std::invalid_argument("total_degree_index_set: dimension must be positive");
  if (budget < 2) throw std::invalid_argument("total_degree_index_set: budget must be at least 2");
  std::size_t p = 0;
  while (binomial(p + 1 + dim, dim) < budget) ++p;
  return MultiIndexSet::total_degree(dim, p);
}

std::vector<Basis1D> local_bases(const HyperRectangle& rect, std::size_t max_degree,
                                 BasisConstruction how) {
  std::vector<Basis1D> bases;
  bases.reserve(rect.dim());
  for (std::size_t k = 0; k < rect.dim(); ++k) {
    if (how == BasisConstruction::Legendre) {
      bases.push_back(legendre_basis(rect.lower(k), rect.upper(k), max_degree));
    } else {
      bases.push_back(stieltjes_basis(rect.lower(k), rect.upper(k), max_degree, max_degree + 1));
    }
  }
  return bases;
}

namespace {

// Row of the design matrix at `point`; `table` is scratch of size dim * (p+1).
void design_row(const std::vector<Basis1D>& bases, const MultiIndexSet& indices,
                std::span<const double> point, std::vector<double>& table, double* row) {
  const std::size_t width = bases.front().max_degree() + 1;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    bases[k].evaluate(point[k], std::span<double>(table.data() + k * width, width));
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& m = indices[i];
    double v = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] != 0) v *= table[k * width + static_cast<std::size_t>(m[k])];
    }
    // psi_0 is identically 1 for a probability density.
    row[i] = v;
  }
}

}  // namespace

double evaluate_surrogate(const GpcSurrogate& surrogate, const HyperRectangle& rect,
                          std::span<const double> point) {
  if (!rect.contains(point)) throw std::invalid_argument("evaluate_surrogate: point outside stratum");
  std::vector<double> table(surrogate.bases.size() * (surrogate.bases.front().max_degree() + 1));
  std::vector<double> row(surrogate.indices.size());
  design_row(surrogate.bases, surrogate.indices, point, table, row.data());
  double value = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) value += surrogate.coefficients[i] * row[i];
  return value;
}

GpcSurrogate fit_gpc(const SampleBatch& batch, std::span<const double> values,
                     const HyperRectangle& rect, const MultiIndexSet& indices,
                     BasisConstruction how) {
  if (values.size() != batch.n) throw std::invalid_argument("fit_gpc: value count mismatch");
  if (batch.dim != rect.dim() || indices.dim() != rect.dim()) {
    throw std::invalid_argument("fit_gpc: dimension mismatch");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("fit_gpc: non-finite function value");
  }
  auto bases = local_bases(rect, std::max<std::size_t>(indices.max_component(), 1), how);

  const auto n = static_cast<Eigen::Index>(batch.n);
  const auto cols = static_cast<Eigen::Index>(indices.size());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> design(n, cols);
  std::vector<double> table(bases.size() * (bases.front().max_degree() + 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    design_row(bases, indices, batch.point(static_cast<std::size_t>(j)), table, design.row(j).data());
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(values.data(), n);

  // constant data: return the exact constant rather than roundoff-level
  // higher coefficients, so refinement can tell "no variation" apart
  if (std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end()) {
    std::vector<double> coef(indices.size(), 0.0);
    coef.front() = values.front();
    return {batch.stratum_id, rect, indices, std::move(coef), std::move(bases), false};
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::VectorXd coef = cod.solve(rhs);

  GpcSurrogate out{batch.stratum_id, rect, indices,
                   std::vector<double>(coef.data(), coef.data() + coef.size()), std::move(bases),
                   cod.rank() < cols};
  return out;
}

}  // namespace sslhs
