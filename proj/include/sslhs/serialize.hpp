#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <nlohmann/json.hpp>

#include "sslhs/driver.hpp"
#include "sslhs/errors.hpp"
#include "sslhs/gpc.hpp"
#include "sslhs/sobol.hpp"
#include "sslhs/stratification.hpp"

namespace sslhs {

/// A trace or stratification document does not match the expected schema.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

inline constexpr int kTraceVersion = 1;

/// {"d": int, "strata": [{"id": int, "parent": int|null, "lower": [...], "upper": [...]}]}
nlohmann::json stratification_to_json(const Stratification& strat);
/// Throws SchemaError on malformed input.
Stratification stratification_from_json(const nlohmann::json& doc);

/// {"stratum": id, "indices": [[m_1..m_d], ...], "coefficients": [...], "rank_deficient": bool}
nlohmann::json surrogate_to_json(const GpcSurrogate& surrogate);

/// [[subset_mask, sigma2], ...] in ascending mask order.
nlohmann::json sobol_to_json(const SobolDecomposition& dec);
SobolDecomposition sobol_from_json(const nlohmann::json& table, std::size_t dim, StratumId id);

std::string score_mode_name(ScoreMode mode);
ScoreMode parse_score_mode(const std::string& name);

std::string basis_name(BasisConstruction how);
BasisConstruction parse_basis(const std::string& name);

struct TraceOptions {
  bool include_surrogates = false;
};

/// Full run trace; see README for the schema. Serialisation is deterministic.
nlohmann::json trace_to_json(const RunTrace& trace, const TraceOptions& options = {});

/// Writes `doc` to `path` through a temporary file and rename, so readers
/// never see a partially written document.
void write_json_file(const std::string& path, const nlohmann::json& doc);

/// Throws SchemaError if the file is missing or not valid JSON.
nlohmann::json read_json_file(const std::string& path);

/// Human-readable run report: per stage the estimate, variance, weight and
/// split, and per stratum the effective dimensions at `alpha`. Throws
/// SchemaError on a malformed trace.
void write_report(const nlohmann::json& trace, std::ostream& out, double alpha = kDefaultAlpha);

/// CSV `stratum_id,subset,sigma2` for one stage (1-based; default the last).
void write_sobol_csv(const nlohmann::json& trace, std::ostream& out,
                     std::optional<std::size_t> stage = std::nullopt);

struct StratumDimensions {
  StratumId stratum_id = 0;
  std::size_t d_sup = 0;
  std::size_t d_tr = 0;
};

/// Effective dimensions of every stratum of one stage (1-based) of a trace.
std::vector<StratumDimensions> trace_effective_dimensions(const nlohmann::json& trace,
                                                          std::size_t stage, double alpha);

}  // namespace sslhs
