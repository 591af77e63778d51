#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sslhs/estimators.hpp"
#include "sslhs/model.hpp"
#include "sslhs/sobol.hpp"

namespace sslhs {

inline constexpr std::size_t kDefaultNbar = 50;
inline constexpr double kDefaultAlpha = 0.99;

struct RunConfig {
  std::size_t dim = 2;
  std::size_t stages = 6;  // L
  std::size_t nbar = kDefaultNbar;
  std::uint64_t seed = 0;
  ScoreMode score_mode = ScoreMode::Total;
  double alpha = kDefaultAlpha;  // effective-dimension threshold reported in traces
  BasisConstruction basis = BasisConstruction::Stieltjes;
  unsigned workers = 1;  // per-stratum fan-out inside a stage
  std::optional<std::size_t> max_degree;  // surrogate degree cap; unset = budget rule

  /// Throws ConfigError unless dim >= 1, stages >= 1, nbar >= 2 and alpha in (0, 1].
  void validate() const;
};

/// N = nbar * L (L + 1) / 2 for a run of L stages.
inline std::size_t total_samples(std::size_t nbar, std::size_t stages) {
  return nbar * stages * (stages + 1) / 2;
}

struct SplitChoice {
  StratumId stratum_id = 0;
  std::size_t dim = 0;   // 0-based
  double score = 0.0;    // p_S^2 * score_k(S)
  bool fallback = false; // no stratum had positive surrogate variance
};

/// Chooses the (stratum, dimension) maximising p_S^2 * score_k(S); ties go to
/// the lower stratum id, then the lower dimension. If every score is zero the
/// largest stratum (lowest id on ties) is split along its longest edge
/// (lowest dimension on ties) and the choice is flagged as a fallback.
SplitChoice select_refinement(const StageEstimate& stage, ScoreMode mode = ScoreMode::Total);

struct StageRecord {
  StageEstimate estimate;
  std::optional<SplitChoice> split;  // refinement proposed for the next stage
};

struct RunTrace {
  RunConfig config;
  std::string model_description;
  std::vector<StageRecord> stages;
  std::vector<double> weights;
  double estimate = 0.0;
  double combined_variance = 0.0;
  std::size_t total_samples = 0;
  bool complete = false;
  std::string error;  // set when the run aborted
};

struct RunResult {
  EnsembleEstimate ensemble;
  RunTrace trace;
};

/// Called after every completed stage and once more when the run finishes or
/// aborts.
using TraceObserver = std::function<void(const RunTrace&)>;

/// Sequential refinement loop: L independent S-LHS stages, one bisection
/// between consecutive stages, inverse-variance combination at the end.
/// Model failures are rethrown after the observer has seen the partial trace.
RunResult run_sequential(const RunConfig& config, const Model& model,
                         const TraceObserver& observer = {},
                         std::string model_description = {});

}  // namespace sslhs
