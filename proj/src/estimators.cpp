#include "sslhs/estimators.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "sslhs/errors.hpp"
#include "sslhs/parallel.hpp"

namespace sslhs {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_point(std::span<const double> point) {
  std::string out = "(";
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (k) out += ", ";
    out += format_double(point[k]);
  }
  return out + ")";
}

double evaluate_checked(const Model& model, std::span<const double> point) {
  const double value = model(point);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "model returned non-finite value " << value << " at " << format_point(point);
    throw ModelError(msg.str());
  }
  return value;
}

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // Bessel-corrected
};

Moments sample_moments(std::span<const double> values) {
  Moments m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / static_cast<double>(values.size() - 1);
  return m;
}

std::vector<double> evaluate_batch(const Model& model, const SampleBatch& batch) {
  std::vector<double> values(batch.n);
  for (std::size_t j = 0; j < batch.n; ++j) values[j] = evaluate_checked(model, batch.point(j));
  return values;
}

}  // namespace

StageEstimate stage_estimate(const Stratification& strat, const Model& model, std::size_t nbar,
                             std::size_t stage, std::uint64_t master_seed,
                             const StageOptions& options) {
  if (nbar < 2) throw std::invalid_argument("stage_estimate: nbar must be at least 2");
  MultiIndexSet indices = total_degree_index_set(strat.dim(), nbar);
  if (options.max_degree && indices.max_degree() > *options.max_degree) {
    indices = MultiIndexSet::total_degree(strat.dim(), *options.max_degree);
  }
  const bool degenerate = indices.max_degree() == 0;

  std::vector<std::optional<StratumStats>> slots(strat.size());
  parallel_for(strat.size(), options.workers, [&](std::size_t i) {
    const Stratum& s = strat.strata()[i];
    RngStream rng = derive_stream(master_seed, stage, s.id);
    const SampleBatch batch = lhs_sample(s.rect, nbar, rng, s.id);
    const std::vector<double> values = evaluate_batch(model, batch);
    const Moments mom = sample_moments(values);
    GpcSurrogate surrogate = fit_gpc(batch, values, s.rect, indices, options.basis);
    SobolDecomposition sobol = sobol_from_gpc(surrogate);
    slots[i].emplace(StratumStats{s.id, s.rect.volume(), mom.mean, std::sqrt(mom.variance), nbar,
                                  std::move(surrogate), std::move(sobol), degenerate});
  });

  StageEstimate out{stage, strat, {}, 0.0, 0.0, nbar * strat.size()};
  out.strata.reserve(slots.size());
  for (auto& slot : slots) {
    out.estimate += slot->probability * slot->mean;
    out.strata.push_back(std::move(*slot));
  }
  out.variance = stage_variance(out.strata);
  return out;
}

double stage_variance(std::span<const StratumStats> strata) {
  double v = 0.0;
  for (const auto& s : strata) {
    v += s.probability * s.probability * s.std_dev * s.std_dev / static_cast<double>(s.samples);
  }
  return v;
}

std::vector<double> optimal_weights(std::span<const double> variances) {
  if (variances.empty()) throw std::invalid_argument("optimal_weights: no variances given");
  std::optional<std::size_t> zero;
  for (std::size_t l = 0; l < variances.size(); ++l) {
    if (!(variances[l] >= 0.0) || !std::isfinite(variances[l])) {
      throw std::invalid_argument("optimal_weights: variances must be finite and non-negative");
    }
    if (variances[l] == 0.0) zero = l;
  }
  std::vector<double> weights(variances.size(), 0.0);
  if (zero) {
    weights[*zero] = 1.0;
    return weights;
  }
  double total = 0.0;
  for (double v : variances) total += 1.0 / v;
  for (std::size_t l = 0; l < variances.size(); ++l) weights[l] = (1.0 / variances[l]) / total;
  return weights;
}

EnsembleEstimate combine(std::span<const double> estimates, std::span<const double> variances,
                         std::span<const double> weights) {
  if (estimates.size() != weights.size() || variances.size() != weights.size()) {
    throw std::invalid_argument("combine: length mismatch");
  }
  if (weights.empty()) throw std::invalid_argument("combine: no stages");
  double sum = 0.0;
  for (double a : weights) {
    if (!(a >= 0.0)) throw std::invalid_argument("combine: negative weight");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("combine: weights must sum to 1");

  EnsembleEstimate out{{weights.begin(), weights.end()},
                       {estimates.begin(), estimates.end()},
                       {variances.begin(), variances.end()},
                       0.0,
                       0.0};
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.value += weights[l] * estimates[l];
    out.variance += weights[l] * weights[l] * variances[l];
  }
  return out;
}

EnsembleEstimate combine(std::span<const StageEstimate> stages, std::span<const double> weights) {
  std::vector<double> est;
  std::vector<double> var;
  for (const auto& s : stages) {
    est.push_back(s.estimate);
    var.push_back(s.variance);
  }
  return combine(est, var, weights);
}

McResult smc_estimate(const Model& model, std::size_t dim, std::size_t n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("smc_estimate: need at least 2 samples");
  const SampleBatch batch = uniform_sample(HyperRectangle::unit(dim), n, rng);
  const Moments m = sample_moments(evaluate_batch(model, batch));
  return {m.mean, m.variance / static_cast<double>(n)};
}

double lhs_estimate(const Model& model, std::size_t dim, std::size_t n, RngStream& rng) {
  const SampleBatch batch = lhs_sample(HyperRectangle::unit(dim), n, rng);
  return sample_moments(evaluate_batch(model, batch)).mean;
}

}  // namespace sslhs
