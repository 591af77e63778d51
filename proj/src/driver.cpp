#include "sslhs/driver.hpp"

#include <stdexcept>

#include "sslhs/errors.hpp"

namespace sslhs {

void RunConfig::validate() const {
  if (dim == 0) throw ConfigError("dimension must be at least 1");
  if (dim > kMaxSobolDim) throw ConfigError("dimension must not exceed 63");
  if (stages == 0) throw ConfigError("number of stages must be at least 1");
  if (nbar < 2) throw ConfigError("per-stratum sample budget nbar must be at least 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (max_degree && *max_degree == 0) throw ConfigError("max_degree must be at least 1");
}

SplitChoice select_refinement(const StageEstimate& stage, ScoreMode mode) {
  std::optional<SplitChoice> best;
  for (const auto& s : stage.strata) {
    const auto scores = dimension_scores(s.sobol, mode);
    const double weight = s.probability * s.probability;
    for (std::size_t k = 0; k < scores.size(); ++k) {
      const double score = weight * scores[k];
      if (!(score > 0.0)) continue;
      const bool better = !best || score > best->score ||
                          (score == best->score && (s.stratum_id < best->stratum_id ||
                                                    (s.stratum_id == best->stratum_id && k < best->dim)));
      if (better) best = SplitChoice{s.stratum_id, k, score, false};
    }
  }
  if (best) return *best;

  const Stratum* largest = nullptr;
  for (const auto& s : stage.stratification.strata()) {
    if (!largest) {
      largest = &s;
      continue;
    }
    const double v = s.rect.volume();
    const double lv = largest->rect.volume();
    if (v > lv || (v == lv && s.id < largest->id)) largest = &s;
  }
  std::size_t dim = 0;
  for (std::size_t k = 1; k < largest->rect.dim(); ++k) {
    if (largest->rect.extent(k) > largest->rect.extent(dim)) dim = k;
  }
  return SplitChoice{largest->id, dim, 0.0, true};
}

RunResult run_sequential(const RunConfig& config, const Model& model, const TraceObserver& observer,
                         std::string model_description) {
  config.validate();
  RunTrace trace;
  trace.config = config;
  trace.model_description = std::move(model_description);

  const StageOptions options{config.basis, config.workers, config.max_degree};
  Stratification strat = Stratification::trivial(config.dim);
  try {
    for (std::size_t l = 1; l <= config.stages; ++l) {
      StageEstimate est = stage_estimate(strat, model, config.nbar, l, config.seed, options);
      std::optional<SplitChoice> split;
      if (l < config.stages) {
        split = select_refinement(est, config.score_mode);
        strat = strat.bisect(split->stratum_id, split->dim);
      }
      trace.total_samples += est.samples;
      trace.stages.push_back(StageRecord{std::move(est), split});
      if (observer) observer(trace);
    }
  } catch (const std::exception& e) {
    trace.error = e.what();
    if (observer) observer(trace);
    throw;
  }

  std::vector<double> estimates;
  std::vector<double> variances;
  for (const auto& rec : trace.stages) {
    estimates.push_back(rec.estimate.estimate);
    variances.push_back(rec.estimate.variance);
  }
  const auto weights = optimal_weights(variances);
  EnsembleEstimate ensemble = combine(estimates, variances, weights);
  trace.weights = ensemble.weights;
  trace.estimate = ensemble.value;
  trace.combined_variance = ensemble.variance;
  trace.complete = true;
  if (observer) observer(trace);
  return RunResult{std::move(ensemble), std::move(trace)};
}

}  // namespace sslhs
