// sslhs: command-line front end for sequential stratified LHS estimation.
//
//   sslhs run          one sequential run; writes <out>/trace.json
//   sslhs convergence  replicated variance study; writes CSVs to <out>
//   sslhs report       human-readable summary of a trace
//   sslhs serve-model  answers the black-box line protocol for P1-P3
//
// Exit codes: 0 ok, 2 configuration, 3 model failure, 4 numerical failure.

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sslhs/convergence.hpp"
#include "sslhs/driver.hpp"
#include "sslhs/errors.hpp"
#include "sslhs/experiment.hpp"
#include "sslhs/problems.hpp"
#include "sslhs/serialize.hpp"

namespace fs = std::filesystem;
using namespace sslhs;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitNumerical = 4;

struct Overrides {
  std::string config;
  std::optional<std::string> problem;
  std::optional<std::size_t> d;
  std::optional<std::size_t> dprime;
  std::optional<double> a;
  std::optional<double> delta;
  std::optional<double> radius;
  std::optional<double> radius2;
  std::optional<double> c;
  std::optional<std::size_t> stages;
  std::optional<std::size_t> nbar;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::string> score_mode;
  std::optional<std::string> blackbox_cmd;
  std::optional<double> alpha;
  std::optional<std::size_t> max_degree;
  std::optional<std::string> basis;
  std::vector<std::size_t> schedule;
  std::vector<std::string> methods;
  std::optional<std::string> preset;
  bool dump_surrogates = false;
};

void add_model_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "TOML experiment file");
  app->add_option("--problem", o.problem, "p1 | p2 | p3 | blackbox");
  app->add_option("--d", o.d, "input dimension");
  app->add_option("--dprime", o.dprime, "effective dimension d' of P2/P3");
  app->add_option("--a", o.a, "P1 level-set constant");
  app->add_option("--delta", o.delta, "P1 delta");
  app->add_option("--radius", o.radius, "P2 radius / P3 radii");
  app->add_option("--radius2", o.radius2, "second P3 radius");
  app->add_option("--c", o.c, "P2/P3 scale constant");
  app->add_option("--blackbox-cmd", o.blackbox_cmd, "shell command of a black-box model");
}

void add_run_options(CLI::App* app, Overrides& o) {
  add_model_options(app, o);
  app->add_option("--stages", o.stages, "number of stages L");
  app->add_option("--nbar", o.nbar, "samples per stratum");
  app->add_option("--seed", o.seed, "master seed (falls back to SSLHS_SEED)");
  app->add_option("--workers", o.workers, "worker threads");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--score-mode", o.score_mode, "total | first-order");
  app->add_option("--alpha", o.alpha, "effective-dimension threshold");
  app->add_option("--basis", o.basis, "stieltjes | legendre");
  app->add_option("--max-degree", o.max_degree, "cap on the local surrogate degree");
  app->add_flag("--dump-surrogates", o.dump_surrogates, "include gPC coefficients in the trace");
}

ExperimentFile resolve(const Overrides& o) {
  ExperimentFile exp = o.config.empty() ? ExperimentFile{} : load_experiment(o.config);
  if (o.problem) exp.model.kind = parse_problem_kind(*o.problem);
  if (o.d) exp.model.dim = *o.d;
  if (o.dprime) exp.model.dprime = *o.dprime;
  if (o.a) exp.model.a = *o.a;
  if (o.delta) exp.model.delta = *o.delta;
  if (o.radius) exp.model.radius = exp.model.radius2 = *o.radius;
  if (o.radius2) exp.model.radius2 = *o.radius2;
  if (o.c) exp.model.c = *o.c;
  if (o.blackbox_cmd) {
    exp.model.command = *o.blackbox_cmd;
    if (!o.problem) exp.model.kind = ProblemKind::Blackbox;
  }
  if (o.stages) exp.run.stages = *o.stages;
  if (o.nbar) exp.run.nbar = *o.nbar;
  if (o.alpha) exp.run.alpha = *o.alpha;
  if (o.max_degree) exp.run.max_degree = *o.max_degree;
  if (o.basis) exp.run.basis = parse_basis(*o.basis);
  if (o.score_mode) exp.run.score_mode = parse_score_mode(*o.score_mode);
  if (o.seed) exp.seed = *o.seed;
  if (!exp.seed) exp.seed = seed_from_environment();
  if (o.reps) exp.reps = *o.reps;
  if (o.workers) exp.workers = *o.workers;
  if (o.out) exp.out_dir = *o.out;
  if (!o.schedule.empty()) exp.schedule = o.schedule;
  if (!o.methods.empty()) {
    exp.methods.clear();
    for (const auto& m : o.methods) exp.methods.push_back(parse_method(m));
  }
  if (o.preset) exp.preset = *o.preset;
  if (o.dump_surrogates) exp.dump_surrogates = true;
  exp.finalize();
  return exp;
}

std::string describe(const ModelSpec& spec) {
  return spec.name() + " d=" + std::to_string(spec.dim) + " " + spec.params();
}

int cmd_run(const Overrides& o) {
  const ExperimentFile exp = resolve(o);
  RunConfig run = exp.run;
  run.workers = exp.workers;
  const Model model = make_model(exp.model);

  fs::create_directories(exp.out_dir);
  const std::string trace_path = (fs::path(exp.out_dir) / "trace.json").string();
  const TraceOptions options{exp.dump_surrogates};
  const auto persist = [&](const RunTrace& trace) { write_json_file(trace_path, trace_to_json(trace, options)); };

  const RunResult result = run_sequential(run, model, persist, describe(exp.model));
  std::cout << "estimate=" << format_double(result.ensemble.value)
            << " variance=" << format_double(result.ensemble.variance)
            << " N=" << result.trace.total_samples << " trace=" << trace_path << '\n';
  return 0;
}

std::string csv_name(const ModelSpec& spec) {
  std::string params = spec.kind == ProblemKind::Blackbox ? std::string("cmd") : spec.params();
  for (char& ch : params) {
    if (ch == ';') ch = '_';
    if (ch == '=') ch = '-';
  }
  return "convergence_" + spec.name() + "_" + params + "_d" + std::to_string(spec.dim) + ".csv";
}

int cmd_convergence(const Overrides& o) {
  const ExperimentFile exp = resolve(o);
  const std::vector<ModelSpec> specs =
      exp.preset.empty() ? std::vector<ModelSpec>{exp.model} : preset_models(exp.preset);
  fs::create_directories(exp.out_dir);

  for (const ModelSpec& spec : specs) {
    StudyConfig study;
    study.spec = spec;
    study.run = exp.run;
    study.run.dim = spec.dim;
    study.schedule = exp.schedule;
    study.reps = exp.reps;
    study.methods = exp.methods;
    study.workers = exp.workers;
    const Model model = make_model(spec);
    const StudyResult result = convergence_study(model, study);

    const fs::path path = fs::path(exp.out_dir) / csv_name(spec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    write_convergence_csv(out, result.records);

    std::cout << describe(spec) << " -> " << path.string() << '\n';
    for (const auto& [method, slope] : result.slopes) {
      std::cout << "  slope " << method_name(method) << " = " << format_double(slope) << '\n';
    }
  }
  return 0;
}

int cmd_report(const std::string& trace_path, double alpha, const std::string& sobol_csv,
               std::optional<std::size_t> stage) {
  const auto trace = read_json_file(trace_path);
  write_report(trace, std::cout, alpha);
  if (!sobol_csv.empty()) {
    std::ofstream out(sobol_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + sobol_csv);
    write_sobol_csv(trace, out, stage);
  }
  return 0;
}

std::vector<double> parse_request(const std::string& line) {
  std::vector<double> point;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    double v = 0.0;
    const auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc()) throw ConfigError("malformed request line: " + line);
    point.push_back(v);
    p = res.ptr;
  }
  return point;
}

int cmd_serve(const Overrides& o) {
  const ExperimentFile exp = resolve(o);
  if (exp.model.kind == ProblemKind::Blackbox) throw ConfigError("serve-model needs p1, p2 or p3");
  const Model model = make_model(exp.model);
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto point = parse_request(line);
    if (point.size() != exp.model.dim) throw ConfigError("request has wrong dimension: " + line);
    std::cout << format_double(model(point)) << '\n' << std::flush;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential stratified Latin hypercube estimation with gPC-guided refinement"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "run the sequential estimator once and write a trace");
  add_run_options(run, run_opts);

  Overrides conv_opts;
  auto* conv = app.add_subcommand("convergence", "replicated variance study against LHS and SMC");
  add_run_options(conv, conv_opts);
  conv->add_option("--reps", conv_opts.reps, "replications per point");
  conv->add_option("--schedule", conv_opts.schedule, "stage counts L")->delimiter(',');
  conv->add_option("--methods", conv_opts.methods, "ss-lhs-gpc,lhs,smc")->delimiter(',');
  conv->add_option("--preset", conv_opts.preset, "fig3 | fig4 | fig5");

  std::string trace_path;
  std::string sobol_csv;
  double report_alpha = kDefaultAlpha;
  std::optional<std::size_t> report_stage;
  auto* report = app.add_subcommand("report", "summarise a run trace");
  report->add_option("trace", trace_path, "trace JSON file")->required();
  report->add_option("--alpha", report_alpha, "effective-dimension threshold");
  report->add_option("--sobol-csv", sobol_csv, "write per-stratum Sobol table");
  report->add_option("--stage", report_stage, "stage for the Sobol table (default: last)");

  Overrides serve_opts;
  auto* serve = app.add_subcommand("serve-model", "evaluate a test problem over stdin/stdout");
  add_model_options(serve, serve_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*conv) return cmd_convergence(conv_opts);
    if (*report) return cmd_report(trace_path, report_alpha, sobol_csv, report_stage);
    if (*serve) return cmd_serve(serve_opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
