#include "sslhs/experiment.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "sslhs/errors.hpp"
#include "sslhs/serialize.hpp"

namespace sslhs {

namespace {

void reject_unknown(const toml::table& table, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, node] : table) {
    if (!allowed.contains(std::string(key.str()))) {
      throw ConfigError("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

const toml::table* sub_table(const toml::table& root, const char* name) {
  const toml::node* node = root.get(name);
  if (!node) return nullptr;
  if (!node->is_table()) throw ConfigError(std::string("'") + name + "' must be a table");
  return node->as_table();
}

template <typename T>
std::optional<T> get(const toml::table& table, const char* key, const std::string& where) {
  const toml::node* node = table.get(key);
  if (!node) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (node->is_string()) return node->value<std::string>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (node->is_boolean()) return node->value<bool>();
  } else {
    if (node->is_integer()) {
      const auto v = *node->value<std::int64_t>();
      if (v >= 0) return static_cast<T>(v);
    }
  }
  throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
}

std::vector<std::size_t> get_size_array(const toml::table& table, const char* key,
                                        const std::string& where) {
  const toml::array* arr = table.get_as<toml::array>(key);
  if (!arr) throw ConfigError("key '" + std::string(key) + "' in " + where + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& el : *arr) {
    auto v = el.value<std::int64_t>();
    if (!el.is_integer() || !v || *v <= 0) {
      throw ConfigError("'" + std::string(key) + "' must contain positive integers");
    }
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

}  // namespace

void ExperimentFile::finalize() {
  model.validate();
  run.dim = model.dim;
  if (seed) run.seed = *seed;
  run.validate();
  if (schedule.empty()) throw ConfigError("convergence schedule must not be empty");
  if (reps < 2) throw ConfigError("reps must be at least 2");
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (workers == 0) throw ConfigError("workers must be at least 1");
  if (!preset.empty()) preset_models(preset);
}

ExperimentFile parse_experiment(std::string_view toml_text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " (" << e.source().begin << ")";
    throw ConfigError(msg.str());
  }
  reject_unknown(root, {"model", "run", "convergence", "output", "workers"}, "top level");

  ExperimentFile exp;
  if (auto w = get<unsigned>(root, "workers", "top level")) exp.workers = *w;

  if (const auto* m = sub_table(root, "model")) {
    const std::string where = "[model]";
    reject_unknown(*m, {"problem", "d", "dprime", "a", "delta", "radius", "radius2", "c", "blackbox_cmd"},
                   where);
    if (auto v = get<std::string>(*m, "problem", where)) exp.model.kind = parse_problem_kind(*v);
    if (auto v = get<std::size_t>(*m, "d", where)) exp.model.dim = *v;
    if (auto v = get<std::size_t>(*m, "dprime", where)) exp.model.dprime = *v;
    if (auto v = get<double>(*m, "a", where)) exp.model.a = *v;
    if (auto v = get<double>(*m, "delta", where)) exp.model.delta = *v;
    if (auto v = get<double>(*m, "radius", where)) exp.model.radius = exp.model.radius2 = *v;
    if (auto v = get<double>(*m, "radius2", where)) exp.model.radius2 = *v;
    if (auto v = get<double>(*m, "c", where)) exp.model.c = *v;
    if (auto v = get<std::string>(*m, "blackbox_cmd", where)) exp.model.command = *v;
  }
  if (const auto* r = sub_table(root, "run")) {
    const std::string where = "[run]";
    reject_unknown(*r, {"stages", "nbar", "seed", "alpha", "score_mode", "basis", "max_degree", "dump_surrogates"}, where);
    if (auto v = get<std::size_t>(*r, "stages", where)) exp.run.stages = *v;
    if (auto v = get<std::size_t>(*r, "nbar", where)) exp.run.nbar = *v;
    if (auto v = get<std::uint64_t>(*r, "seed", where)) exp.seed = *v;
    if (auto v = get<double>(*r, "alpha", where)) exp.run.alpha = *v;
    if (auto v = get<std::string>(*r, "score_mode", where)) exp.run.score_mode = parse_score_mode(*v);
    if (auto v = get<std::string>(*r, "basis", where)) exp.run.basis = parse_basis(*v);
    if (auto v = get<std::size_t>(*r, "max_degree", where)) exp.run.max_degree = *v;
    if (auto v = get<bool>(*r, "dump_surrogates", where)) exp.dump_surrogates = *v;
  }
  if (const auto* c = sub_table(root, "convergence")) {
    const std::string where = "[convergence]";
    reject_unknown(*c, {"schedule", "reps", "methods", "preset"}, where);
    if (c->get("schedule")) exp.schedule = get_size_array(*c, "schedule", where);
    if (auto v = get<std::size_t>(*c, "reps", where)) exp.reps = *v;
    if (auto v = get<std::string>(*c, "preset", where)) exp.preset = *v;
    if (const toml::node* node = c->get("methods")) {
      const toml::array* arr = node->as_array();
      if (!arr) throw ConfigError("'methods' in [convergence] must be an array of strings");
      exp.methods.clear();
      for (const auto& el : *arr) {
        if (!el.is_string()) throw ConfigError("'methods' in [convergence] must be an array of strings");
        exp.methods.push_back(parse_method(*el.value<std::string>()));
      }
    }
  }
  if (const auto* o = sub_table(root, "output")) {
    reject_unknown(*o, {"dir"}, "[output]");
    if (auto v = get<std::string>(*o, "dir", "[output]")) exp.out_dir = *v;
  }
  return exp;
}

ExperimentFile load_experiment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment(text.str(), path);
}

std::vector<ModelSpec> preset_models(const std::string& name) {
  std::vector<ModelSpec> out;
  if (name == "fig3") {
    for (double delta : {1.0, 0.1, 0.01}) {
      ModelSpec s;
      s.kind = ProblemKind::P1;
      s.dim = 2;
      s.delta = delta;
      out.push_back(s);
    }
  } else if (name == "fig4") {
    const std::pair<std::size_t, std::size_t> cases[] = {{2, 2}, {2, 3}, {2, 10}, {3, 3}, {3, 4}, {3, 10}};
    for (auto [dp, d] : cases) {
      ModelSpec s;
      s.kind = ProblemKind::P2;
      s.dprime = dp;
      s.dim = d;
      out.push_back(s);
    }
  } else if (name == "fig5") {
    for (std::size_t d : {4, 5, 10}) {
      ModelSpec s;
      s.kind = ProblemKind::P3;
      s.dprime = 2;
      s.dim = d;
      out.push_back(s);
    }
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig3, fig4 or fig5)");
  }
  return out;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("SSLHS_SEED");
  if (!raw || !*raw) return std::nullopt;
  std::uint64_t seed = 0;
  const std::string_view text(raw);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("SSLHS_SEED must be an unsigned 64-bit integer");
  }
  return seed;
}

}  // namespace sslhs
