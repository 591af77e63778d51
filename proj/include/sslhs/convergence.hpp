#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sslhs/driver.hpp"
#include "sslhs/model.hpp"
#include "sslhs/problems.hpp"

namespace sslhs {

enum class Method { SsLhsGpc, Lhs, Smc };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct ConvergenceRecord {
  Method method = Method::SsLhsGpc;
  std::string problem;
  std::string params;
  std::size_t dim = 0;
  std::size_t samples = 0;  // N
  std::size_t reps = 0;     // R
  double mean = 0.0;
  double variance = 0.0;    // unbiased sample variance of the R estimates
};

/// Seed of replication `rep` for `method` at `stages` under `base_seed`.
std::uint64_t replication_seed(std::uint64_t base_seed, Method method, std::size_t stages,
                               std::size_t rep);

/// One estimate of `method` with total budget N = nbar * L (L + 1) / 2 taken
/// from `run`, using `seed` in place of run.seed.
double single_estimate(const Model& model, const RunConfig& run, Method method, std::uint64_t seed);

/// R independent replications (seeds from replication_seed) reduced in
/// replication order. Throws std::invalid_argument if reps < 2; any failing
/// replication aborts the record.
ConvergenceRecord replicate(const Model& model, const ModelSpec& spec, const RunConfig& run,
                            Method method, std::size_t reps, unsigned workers = 1);

/// Same, with explicit replication seeds.
ConvergenceRecord replicate_with_seeds(const Model& model, const ModelSpec& spec,
                                       const RunConfig& run, Method method,
                                       std::span<const std::uint64_t> seeds, unsigned workers = 1);

/// Ordinary least squares slope of log10(variance) against log10(N); points
/// with non-positive variance are skipped. NaN with fewer than two points.
double loglog_slope(std::span<const double> samples, std::span<const double> variances);

inline const std::vector<std::size_t> kDefaultSchedule = {6, 20, 63};

struct StudyConfig {
  ModelSpec spec;
  RunConfig run;  // dim, nbar, seed and score mode; stages come from the schedule
  std::vector<std::size_t> schedule = kDefaultSchedule;
  std::size_t reps = 100;
  std::vector<Method> methods = {Method::SsLhsGpc, Method::Lhs, Method::Smc};
  unsigned workers = 1;
};

struct StudyResult {
  std::vector<ConvergenceRecord> records;
  std::map<Method, double> slopes;
};

/// One record per (method, L) pair plus the fitted slope of each method.
StudyResult convergence_study(const Model& model, const StudyConfig& config);

/// Header `method,problem,params,d,N,R,mean,variance` and one row per record.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRecord> records);

}  // namespace sslhs
