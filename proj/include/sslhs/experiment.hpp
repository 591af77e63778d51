#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sslhs/convergence.hpp"
#include "sslhs/driver.hpp"
#include "sslhs/problems.hpp"

namespace sslhs {

/// Declarative description of a run or convergence study.
///
///   [model]        problem, d, dprime, a, delta, radius, radius2, c, blackbox_cmd
///   [run]          stages, nbar, seed, alpha, score_mode, basis, max_degree,
///                  dump_surrogates
///   [convergence]  schedule, reps, methods, preset
///   [output]       dir
///   workers        (top level)
///
/// Every key is optional; unknown keys and tables are rejected.
struct ExperimentFile {
  ModelSpec model;
  RunConfig run;
  std::optional<std::uint64_t> seed;  // unset: fall back to SSLHS_SEED, then 0
  std::vector<std::size_t> schedule = kDefaultSchedule;
  std::size_t reps = 100;
  std::vector<Method> methods = {Method::SsLhsGpc, Method::Lhs, Method::Smc};
  std::string preset;  // fig3 | fig4 | fig5 | empty
  std::string out_dir = ".";
  unsigned workers = 1;
  bool dump_surrogates = false;

  /// Throws ConfigError on inconsistent values; also copies model.dim into run.dim.
  void finalize();
};

/// Throws ConfigError on syntax errors, type mismatches and unknown keys.
ExperimentFile parse_experiment(std::string_view toml_text, std::string_view source = "<config>");
ExperimentFile load_experiment(const std::string& path);

/// Model lists behind the convergence presets: fig3 (P1, delta in {1, 0.1, 0.01}),
/// fig4 (P2, (dprime, d) in {(2,2),(2,3),(2,10),(3,3),(3,4),(3,10)}) and
/// fig5 (P3 with dprime = 2, d in {4, 5, 10}). Throws ConfigError otherwise.
std::vector<ModelSpec> preset_models(const std::string& name);

/// Seed from SSLHS_SEED, if set and valid. Throws ConfigError if set but
/// not an unsigned 64-bit integer.
std::optional<std::uint64_t> seed_from_environment();

}  // namespace sslhs
