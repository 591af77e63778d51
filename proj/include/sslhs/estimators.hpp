#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sslhs/gpc.hpp"
#include "sslhs/model.hpp"
#include "sslhs/sampling.hpp"
#include "sslhs/sobol.hpp"
#include "sslhs/stratification.hpp"

namespace sslhs {

struct StratumStats {
  StratumId stratum_id = 0;
  double probability = 0.0;  // p_S
  double mean = 0.0;         // LHS sample mean
  double std_dev = 0.0;      // Bessel-corrected sample standard deviation
  std::size_t samples = 0;   // N_S
  GpcSurrogate surrogate;
  SobolDecomposition sobol;
  bool degenerate_surrogate = false;  // budget admits only the constant term
};

/// One S-LHS estimator of the sequence.
struct StageEstimate {
  std::size_t stage = 0;
  Stratification stratification;
  std::vector<StratumStats> strata;
  double estimate = 0.0;      // sum_S p_S mean_S
  double variance = 0.0;      // v_l
  std::size_t samples = 0;    // N^(l)
};

struct StageOptions {
  BasisConstruction basis = BasisConstruction::Stieltjes;
  unsigned workers = 1;
  /// Optional cap on the total degree of the local surrogates. Unset: the
  /// largest degree whose basis size stays below nbar.
  std::optional<std::size_t> max_degree;
};

/// Draws an LHS of `nbar` points in every stratum from
/// derive_stream(master_seed, stage, id), evaluates the model, and fits the
/// local gPC surrogate and its Sobol decomposition. Throws ModelError on a
/// non-finite model value and std::invalid_argument if nbar < 2.
StageEstimate stage_estimate(const Stratification& strat, const Model& model, std::size_t nbar,
                             std::size_t stage, std::uint64_t master_seed,
                             const StageOptions& options = {});

/// Variance estimate sum_S p_S^2 sigma_S^2 / N_S; with N_S = nbar this is
/// (1/nbar) sum_S p_S^2 sigma_S^2.
double stage_variance(std::span<const StratumStats> strata);
inline double stage_variance(const StageEstimate& stage) { return stage_variance(stage.strata); }

/// Inverse-variance weights. If some variances are zero, all weight goes to
/// the last zero-variance entry. Throws std::invalid_argument on empty or
/// negative input.
std::vector<double> optimal_weights(std::span<const double> variances);

struct EnsembleEstimate {
  std::vector<double> weights;
  std::vector<double> estimates;
  std::vector<double> variances;
  double value = 0.0;
  double variance = 0.0;  // sum_l alpha_l^2 v_l; equals 1 / sum_l (1/v_l) for optimal weights
};

/// Weighted combination of independent unbiased estimates. Throws
/// std::invalid_argument on length mismatch or weights outside the simplex.
EnsembleEstimate combine(std::span<const double> estimates, std::span<const double> variances,
                         std::span<const double> weights);
EnsembleEstimate combine(std::span<const StageEstimate> stages, std::span<const double> weights);

struct McResult {
  double mean = 0.0;
  double variance = 0.0;  // s^2 / N, the usual estimator-variance proxy
};

/// Plain Monte Carlo with n i.i.d. uniform points on [0,1]^dim (n >= 2).
McResult smc_estimate(const Model& model, std::size_t dim, std::size_t n, RngStream& rng);

/// Mean over one LHS design of n points on [0,1]^dim (n >= 1).
double lhs_estimate(const Model& model, std::size_t dim, std::size_t n, RngStream& rng);

}  // namespace sslhs
