#include "sslhs/sobol.hpp"

#include <bit>
#include <stdexcept>

namespace sslhs {

SobolDecomposition sobol_from_gpc(const GpcSurrogate& surrogate) {
  const std::size_t dim = surrogate.indices.dim();
  if (dim > kMaxSobolDim) throw std::invalid_argument("sobol_from_gpc: at most 63 dimensions");
  SobolDecomposition dec{surrogate.stratum_id, dim, 0.0, {}};
  for (std::size_t i = 0; i < surrogate.indices.size(); ++i) {
    const auto& m = surrogate.indices[i];
    SubsetMask mask = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      if (m[k] != 0) mask |= SubsetMask{1} << k;
    }
    if (mask == 0) continue;
    const double c = surrogate.coefficients[i];
    if (c == 0.0) continue;
    dec.contributions[mask] += c * c;
  }
  // Sum in map order so the identity total == sum of contributions is exact.
  for (const auto& [mask, s2] : dec.contributions) dec.total_variance += s2;
  return dec;
}

namespace {

// Relative slack so that a threshold of alpha = 1 is met despite summation
// order differences.
constexpr double kThresholdSlack = 1e-12;

template <typename Keep>
bool captures(const SobolDecomposition& dec, double alpha, Keep keep) {
  double sum = 0.0;
  for (const auto& [mask, s2] : dec.contributions) {
    if (keep(mask)) sum += s2;
  }
  return sum >= alpha * dec.total_variance * (1.0 - kThresholdSlack);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("effective dimension: alpha must be in (0, 1]");
}

}  // namespace

std::size_t effective_dim_superposition(const SobolDecomposition& dec, double alpha) {
  check_alpha(alpha);
  if (dec.total_variance <= 0.0) return 0;
  for (std::size_t s = 1; s <= dec.dim; ++s) {
    if (captures(dec, alpha, [s](SubsetMask m) { return static_cast<std::size_t>(std::popcount(m)) <= s; })) {
      return s;
    }
  }
  return dec.dim;
}

std::size_t effective_dim_truncation(const SobolDecomposition& dec, double alpha) {
  check_alpha(alpha);
  if (dec.total_variance <= 0.0) return 0;
  for (std::size_t t = 1; t <= dec.dim; ++t) {
    if (captures(dec, alpha, [t](SubsetMask m) { return std::bit_width(m) <= t; })) return t;
  }
  return dec.dim;
}

std::vector<double> dimension_scores(const SobolDecomposition& dec, ScoreMode mode) {
  std::vector<double> scores(dec.dim, 0.0);
  for (const auto& [mask, s2] : dec.contributions) {
    if (mode == ScoreMode::FirstOrder) {
      if (std::has_single_bit(mask)) scores[static_cast<std::size_t>(std::countr_zero(mask))] += s2;
      continue;
    }
    for (std::size_t k = 0; k < dec.dim; ++k) {
      if (mask & (SubsetMask{1} << k)) scores[k] += s2;
    }
  }
  return scores;
}

}  // namespace sslhs
