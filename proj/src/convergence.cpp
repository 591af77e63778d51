#include "sslhs/convergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sslhs/errors.hpp"
#include "sslhs/estimators.hpp"
#include "sslhs/parallel.hpp"

namespace sslhs {

std::string method_name(Method m) {
  switch (m) {
    case Method::SsLhsGpc: return "ss-lhs-gpc";
    case Method::Lhs: return "lhs";
    case Method::Smc: return "smc";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "ss-lhs-gpc") return Method::SsLhsGpc;
  if (name == "lhs") return Method::Lhs;
  if (name == "smc") return Method::Smc;
  throw ConfigError("unknown method '" + name + "' (expected ss-lhs-gpc, lhs or smc)");
}

std::uint64_t replication_seed(std::uint64_t base_seed, Method method, std::size_t stages,
                               std::size_t rep) {
  const std::uint64_t tag = static_cast<std::uint64_t>(stages) * 4 + static_cast<std::uint64_t>(method);
  return mix_seed(mix_seed(base_seed, tag), rep);
}

double single_estimate(const Model& model, const RunConfig& run, Method method, std::uint64_t seed) {
  RunConfig cfg = run;
  cfg.seed = seed;
  cfg.workers = 1;
  const std::size_t n = total_samples(cfg.nbar, cfg.stages);
  switch (method) {
    case Method::SsLhsGpc: return run_sequential(cfg, model).ensemble.value;
    case Method::Lhs: {
      RngStream rng = derive_stream(seed, 0, 0);
      return lhs_estimate(model, cfg.dim, n, rng);
    }
    case Method::Smc: {
      RngStream rng = derive_stream(seed, 0, 1);
      return smc_estimate(model, cfg.dim, n, rng).mean;
    }
  }
  throw std::logic_error("unhandled method");
}

ConvergenceRecord replicate_with_seeds(const Model& model, const ModelSpec& spec,
                                       const RunConfig& run, Method method,
                                       std::span<const std::uint64_t> seeds, unsigned workers) {
  if (seeds.size() < 2) throw std::invalid_argument("replicate: need at least 2 replications");
  std::vector<double> estimates(seeds.size());
  parallel_for(seeds.size(), workers,
               [&](std::size_t r) { estimates[r] = single_estimate(model, run, method, seeds[r]); });

  ConvergenceRecord rec{method, spec.name(), spec.params(), run.dim,
                        total_samples(run.nbar, run.stages), seeds.size(), 0.0, 0.0};
  for (double e : estimates) rec.mean += e;
  rec.mean /= static_cast<double>(estimates.size());
  double ss = 0.0;
  for (double e : estimates) ss += (e - rec.mean) * (e - rec.mean);
  rec.variance = ss / static_cast<double>(estimates.size() - 1);
  return rec;
}

ConvergenceRecord replicate(const Model& model, const ModelSpec& spec, const RunConfig& run,
                            Method method, std::size_t reps, unsigned workers) {
  std::vector<std::uint64_t> seeds(reps);
  for (std::size_t r = 0; r < reps; ++r) seeds[r] = replication_seed(run.seed, method, run.stages, r);
  return replicate_with_seeds(model, spec, run, method, seeds, workers);
}

double loglog_slope(std::span<const double> samples, std::span<const double> variances) {
  if (samples.size() != variances.size()) throw std::invalid_argument("loglog_slope: length mismatch");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] > 0.0 && variances[i] > 0.0) {
      xs.push_back(std::log10(samples[i]));
      ys.push_back(std::log10(variances[i]));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

StudyResult convergence_study(const Model& model, const StudyConfig& config) {
  if (config.schedule.empty()) throw ConfigError("convergence study needs a non-empty stage schedule");
  if (config.reps < 2) throw ConfigError("convergence study needs at least 2 replications");
  StudyResult result;
  for (Method method : config.methods) {
    std::vector<double> ns;
    std::vector<double> vars;
    for (std::size_t stages : config.schedule) {
      RunConfig run = config.run;
      run.stages = stages;
      run.validate();
      auto rec = replicate(model, config.spec, run, method, config.reps, config.workers);
      ns.push_back(static_cast<double>(rec.samples));
      vars.push_back(rec.variance);
      result.records.push_back(std::move(rec));
    }
    result.slopes[method] = loglog_slope(ns, vars);
  }
  return result;
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
  out << "method,problem,params,d,N,R,mean,variance\n";
  for (const auto& r : records) {
    out << method_name(r.method) << ',' << r.problem << ',' << r.params << ',' << r.dim << ','
        << r.samples << ',' << r.reps << ',' << format_double(r.mean) << ','
        << format_double(r.variance) << '\n';
  }
}

}  // namespace sslhs
