#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "sslhs/gpc.hpp"

namespace sslhs {

/// Subset of {0, ..., d-1} as a bitmask; bit k set means dimension k is in T.
using SubsetMask = std::uint64_t;
inline constexpr std::size_t kMaxSobolDim = 63;

/// Variance contributions sigma^2_T of the non-empty subsets T. Subsets that
/// are absent contribute zero.
struct SobolDecomposition {
  StratumId stratum_id = 0;
  std::size_t dim = 0;
  double total_variance = 0.0;
  std::map<SubsetMask, double> contributions;

  double contribution(SubsetMask subset) const {
    auto it = contributions.find(subset);
    return it == contributions.end() ? 0.0 : it->second;
  }
};

/// sigma^2_T = sum of squared coefficients whose support is exactly T.
SobolDecomposition sobol_from_gpc(const GpcSurrogate& surrogate);

/// Smallest s such that the subsets of size <= s carry at least alpha of the
/// variance; 0 when the total variance is zero.
std::size_t effective_dim_superposition(const SobolDecomposition& dec, double alpha);

/// Smallest t such that the subsets of {0, ..., t-1} carry at least alpha of
/// the variance; 0 when the total variance is zero.
std::size_t effective_dim_truncation(const SobolDecomposition& dec, double alpha);

enum class ScoreMode { Total, FirstOrder };

/// Per-dimension refinement score: the unnormalised total Sobol index
/// (sum over T containing k), or only sigma^2_{{k}} in FirstOrder mode.
std::vector<double> dimension_scores(const SobolDecomposition& dec,
                                     ScoreMode mode = ScoreMode::Total);

}  // namespace sslhs
