#include "sslhs/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sslhs/model.hpp"

namespace sslhs {

using nlohmann::json;

json stratification_to_json(const Stratification& strat) {
  json strata = json::array();
  for (const auto& s : strat.strata()) {
    strata.push_back({{"id", s.id},
                      {"parent", s.parent ? json(*s.parent) : json(nullptr)},
                      {"lower", s.rect.lower()},
                      {"upper", s.rect.upper()}});
  }
  return {{"d", strat.dim()}, {"strata", std::move(strata)}};
}

Stratification stratification_from_json(const json& doc) {
  try {
    const auto dim = doc.at("d").get<std::size_t>();
    std::vector<Stratum> strata;
    for (const auto& s : doc.at("strata")) {
      std::optional<StratumId> parent;
      if (!s.at("parent").is_null()) parent = s.at("parent").get<StratumId>();
      strata.push_back(Stratum{s.at("id").get<StratumId>(), parent,
                               HyperRectangle(s.at("lower").get<std::vector<double>>(),
                                              s.at("upper").get<std::vector<double>>())});
    }
    return Stratification::from_strata(dim, std::move(strata));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed stratification: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed stratification: ") + e.what());
  }
}

json surrogate_to_json(const GpcSurrogate& surrogate) {
  return {{"stratum", surrogate.stratum_id},
          {"indices", surrogate.indices.indices()},
          {"coefficients", surrogate.coefficients},
          {"rank_deficient", surrogate.rank_deficient}};
}

json sobol_to_json(const SobolDecomposition& dec) {
  json table = json::array();
  for (const auto& [mask, s2] : dec.contributions) table.push_back(json::array({mask, s2}));
  return table;
}

SobolDecomposition sobol_from_json(const json& table, std::size_t dim, StratumId id) {
  SobolDecomposition dec{id, dim, 0.0, {}};
  for (const auto& row : table) {
    dec.contributions[row.at(0).get<SubsetMask>()] = row.at(1).get<double>();
  }
  for (const auto& [mask, s2] : dec.contributions) dec.total_variance += s2;
  return dec;
}

std::string score_mode_name(ScoreMode mode) {
  return mode == ScoreMode::Total ? "total" : "first-order";
}

ScoreMode parse_score_mode(const std::string& name) {
  if (name == "total") return ScoreMode::Total;
  if (name == "first-order" || name == "first") return ScoreMode::FirstOrder;
  throw ConfigError("unknown score mode '" + name + "' (expected total or first-order)");
}

std::string basis_name(BasisConstruction how) {
  return how == BasisConstruction::Stieltjes ? "stieltjes" : "legendre";
}

BasisConstruction parse_basis(const std::string& name) {
  if (name == "stieltjes") return BasisConstruction::Stieltjes;
  if (name == "legendre") return BasisConstruction::Legendre;
  throw ConfigError("unknown basis '" + name + "' (expected stieltjes or legendre)");
}

namespace {

json config_to_json(const RunConfig& c) {
  return {{"d", c.dim},
          {"stages", c.stages},
          {"nbar", c.nbar},
          {"seed", c.seed},
          {"score_mode", score_mode_name(c.score_mode)},
          {"alpha", c.alpha},
          {"basis", basis_name(c.basis)},
          {"max_degree", c.max_degree ? json(*c.max_degree) : json(nullptr)}};
}

json stratum_to_json(const StratumStats& s, double alpha, const TraceOptions& options) {
  json out = {{"id", s.stratum_id},
              {"p", s.probability},
              {"mean", s.mean},
              {"std", s.std_dev},
              {"n", s.samples},
              {"surrogate_variance", s.sobol.total_variance},
              {"d_sup", effective_dim_superposition(s.sobol, alpha)},
              {"d_tr", effective_dim_truncation(s.sobol, alpha)},
              {"scores", dimension_scores(s.sobol, ScoreMode::Total)},
              {"rank_deficient", s.surrogate.rank_deficient},
              {"degenerate_surrogate", s.degenerate_surrogate},
              {"sobol", sobol_to_json(s.sobol)}};
  if (options.include_surrogates) out["gpc"] = surrogate_to_json(s.surrogate);
  return out;
}

}  // namespace

json trace_to_json(const RunTrace& trace, const TraceOptions& options) {
  json stages = json::array();
  for (const auto& rec : trace.stages) {
    const auto& est = rec.estimate;
    json strata = json::array();
    for (const auto& s : est.strata) strata.push_back(stratum_to_json(s, trace.config.alpha, options));
    json split = nullptr;
    if (rec.split) {
      split = {{"stratum", rec.split->stratum_id},
               {"dim", rec.split->dim},
               {"score", rec.split->score},
               {"fallback", rec.split->fallback}};
    }
    stages.push_back({{"stage", est.stage},
                      {"estimate", est.estimate},
                      {"variance", est.variance},
                      {"samples", est.samples},
                      {"stratification", stratification_to_json(est.stratification)},
                      {"strata", std::move(strata)},
                      {"split", std::move(split)}});
  }
  const char* status = trace.complete ? "complete" : (trace.error.empty() ? "running" : "aborted");
  json doc = {{"format", "sslhs-trace"},
              {"version", kTraceVersion},
              {"status", status},
              {"error", trace.error.empty() ? json(nullptr) : json(trace.error)},
              {"model", trace.model_description},
              {"config", config_to_json(trace.config)},
              {"stages", std::move(stages)},
              {"total_samples", trace.total_samples}};
  if (trace.complete) {
    doc["weights"] = trace.weights;
    doc["estimate"] = trace.estimate;
    doc["combined_variance"] = trace.combined_variance;
  }
  return doc;
}

void write_json_file(const std::string& path, const json& doc) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp);
    out << doc.dump(1) << '\n';
    if (!out) throw ConfigError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw ConfigError("cannot rename " + tmp + " to " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

namespace {

void check_trace(const json& trace) {
  if (!trace.is_object() || trace.value("format", "") != "sslhs-trace") {
    throw SchemaError("not an sslhs trace (missing format tag)");
  }
  if (trace.value("version", 0) != kTraceVersion) {
    throw SchemaError("unsupported trace version " + trace.value("version", json(nullptr)).dump());
  }
  if (!trace.contains("stages") || !trace.at("stages").is_array()) throw SchemaError("trace has no stages array");
}

const json& stage_at(const json& trace, std::size_t stage) {
  const auto& stages = trace.at("stages");
  if (stage == 0 || stage > stages.size()) {
    throw SchemaError("stage " + std::to_string(stage) + " not present in trace");
  }
  return stages.at(stage - 1);
}

}  // namespace

std::vector<StratumDimensions> trace_effective_dimensions(const json& trace, std::size_t stage,
                                                          double alpha) {
  check_trace(trace);
  try {
    const auto dim = trace.at("config").at("d").get<std::size_t>();
    std::vector<StratumDimensions> out;
    for (const auto& s : stage_at(trace, stage).at("strata")) {
      const auto id = s.at("id").get<StratumId>();
      const auto dec = sobol_from_json(s.at("sobol"), dim, id);
      out.push_back({id, effective_dim_superposition(dec, alpha), effective_dim_truncation(dec, alpha)});
    }
    return out;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed trace: ") + e.what());
  }
}

void write_report(const json& trace, std::ostream& out, double alpha) {
  check_trace(trace);
  try {
    const auto& cfg = trace.at("config");
    out << "model: " << trace.at("model").get<std::string>() << '\n'
        << "status: " << trace.at("status").get<std::string>() << '\n'
        << "d=" << cfg.at("d").get<std::size_t>() << " stages=" << cfg.at("stages").get<std::size_t>()
        << " nbar=" << cfg.at("nbar").get<std::size_t>() << " seed=" << cfg.at("seed").get<std::uint64_t>()
        << " score_mode=" << cfg.at("score_mode").get<std::string>() << '\n';
    if (trace.contains("weights")) {
      out << "estimate: " << format_double(trace.at("estimate").get<double>())
          << "  combined variance: " << format_double(trace.at("combined_variance").get<double>())
          << "  N: " << trace.at("total_samples").get<std::size_t>() << '\n';
    }
    if (!trace.at("error").is_null()) out << "error: " << trace.at("error").get<std::string>() << '\n';

    std::vector<double> weights;
    if (trace.contains("weights")) weights = trace.at("weights").get<std::vector<double>>();
    out << '\n' << std::left << std::setw(6) << "stage" << std::setw(8) << "strata" << std::setw(24)
        << "estimate" << std::setw(24) << "variance" << std::setw(24) << "weight" << "split\n";
    double weight_sum = 0.0;
    const auto& stages = trace.at("stages");
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& st = stages[i];
      std::string split = "-";
      if (!st.at("split").is_null()) {
        const auto& sp = st.at("split");
        split = "stratum " + std::to_string(sp.at("stratum").get<StratumId>()) + " dim " +
                std::to_string(sp.at("dim").get<std::size_t>() + 1);
        if (sp.at("fallback").get<bool>()) split += " (fallback)";
      }
      std::string weight = "-";
      if (i < weights.size()) {
        weight = format_double(weights[i]);
        weight_sum += weights[i];
      }
      out << std::setw(6) << st.at("stage").get<std::size_t>() << std::setw(8) << st.at("strata").size()
          << std::setw(24) << format_double(st.at("estimate").get<double>()) << std::setw(24)
          << format_double(st.at("variance").get<double>()) << std::setw(24) << weight << split << '\n';
    }
    if (!weights.empty()) out << "weights sum: " << format_double(weight_sum) << '\n';

    out << "\neffective dimensions per stratum (alpha = " << format_double(alpha) << ")\n";
    for (std::size_t l = 1; l <= stages.size(); ++l) {
      out << "stage " << l << ":";
      for (const auto& d : trace_effective_dimensions(trace, l, alpha)) {
        out << "  [" << d.stratum_id << "] d_sup=" << d.d_sup << " d_tr=" << d.d_tr;
      }
      out << '\n';
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed trace: ") + e.what());
  }
}

void write_sobol_csv(const json& trace, std::ostream& out, std::optional<std::size_t> stage) {
  check_trace(trace);
  try {
    const std::size_t l = stage.value_or(trace.at("stages").size());
    out << "stratum_id,subset,sigma2\n";
    for (const auto& s : stage_at(trace, l).at("strata")) {
      for (const auto& row : s.at("sobol")) {
        out << s.at("id").get<StratumId>() << ',' << row.at(0).get<SubsetMask>() << ','
            << format_double(row.at(1).get<double>()) << '\n';
      }
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace sslhs
