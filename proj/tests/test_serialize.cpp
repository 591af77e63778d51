#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "sslhs/experiment.hpp"
#include "sslhs/problems.hpp"
#include "sslhs/serialize.hpp"

using namespace sslhs;

namespace {

RunResult small_run(const Model& model, std::size_t dim, std::size_t stages) {
  RunConfig cfg;
  cfg.dim = dim;
  cfg.stages = stages;
  cfg.seed = 3;
  return run_sequential(cfg, model, {}, "test model");
}

}  // namespace

TEST(StratificationJson, RoundTrip) {
  const auto strat = Stratification::trivial(3).bisect(0, 2).bisect(2, 0).bisect(1, 1);
  const auto doc = stratification_to_json(strat);
  EXPECT_EQ(doc.at("d"), 3);
  EXPECT_TRUE(doc.at("strata")[0].contains("parent"));
  const auto back = stratification_from_json(doc);
  EXPECT_EQ(back, strat);
  EXPECT_EQ(back.next_id(), strat.next_id());
}

TEST(StratificationJson, MalformedInputRejected) {
  EXPECT_THROW(stratification_from_json(nlohmann::json::parse(R"({"strata": []})")), SchemaError);
  EXPECT_THROW(stratification_from_json(nlohmann::json::parse(
                   R"({"d": 1, "strata": [{"id": 0, "parent": null, "lower": [0.5], "upper": [0.2]}]})")),
               SchemaError);
}

TEST(TraceJson, Contents) {
  const Model f = [](std::span<const double> y) { return eval_p2(y, 2, 0.4, 1.0); };
  const auto res = small_run(f, 3, 4);
  const auto doc = trace_to_json(res.trace);
  EXPECT_EQ(doc.at("format"), "sslhs-trace");
  EXPECT_EQ(doc.at("version"), kTraceVersion);
  EXPECT_EQ(doc.at("status"), "complete");
  EXPECT_EQ(doc.at("model"), "test model");
  EXPECT_EQ(doc.at("stages").size(), 4u);
  EXPECT_EQ(doc.at("total_samples"), 500);
  EXPECT_EQ(doc.at("weights").size(), 4u);
  EXPECT_TRUE(doc.at("stages")[3].at("split").is_null());
  EXPECT_FALSE(doc.at("stages")[0].at("split").is_null());
  const auto& s0 = doc.at("stages")[0].at("strata")[0];
  for (const char* key : {"id", "p", "mean", "std", "n", "d_sup", "d_tr", "scores", "sobol"}) EXPECT_TRUE(s0.contains(key)) << key;
  EXPECT_FALSE(s0.contains("gpc"));
  EXPECT_TRUE(trace_to_json(res.trace, {true}).at("stages")[0].at("strata")[0].contains("gpc"));
}

TEST(TraceJson, SobolTableRoundTrip) {
  const Model f = [](std::span<const double> y) { return y[0] * y[1] + y[2]; };
  const auto res = small_run(f, 3, 2);
  const auto& stats = res.trace.stages[1].estimate.strata[0];
  const auto back = sobol_from_json(sobol_to_json(stats.sobol), 3, stats.stratum_id);
  EXPECT_EQ(back.contributions, stats.sobol.contributions);
  EXPECT_EQ(back.total_variance, stats.sobol.total_variance);
}

TEST(Report, ConstantModelWeightsOnLatestStage) {
  const Model c = [](std::span<const double>) { return 1.0; };
  const auto doc = nlohmann::json::parse(trace_to_json(small_run(c, 2, 3).trace).dump());
  EXPECT_EQ(doc.at("weights"), nlohmann::json::array({0.0, 0.0, 1.0}));
  std::ostringstream out;
  write_report(doc, out);
  const auto text = out.str();
  EXPECT_NE(text.find("weights sum: 1\n"), std::string::npos) << text;
  EXPECT_NE(text.find("(fallback)"), std::string::npos) << text;
}

TEST(Report, EffectiveDimensionsAndSobolCsv) {
  const Model f = [](std::span<const double> y) { return eval_p3(y, 2, 0.4, 0.4, 1.0); };
  const auto doc = trace_to_json(small_run(f, 4, 2).trace);
  const auto dims = trace_effective_dimensions(doc, 1, 0.99);
  ASSERT_EQ(dims.size(), 1u);
  EXPECT_GE(dims[0].d_sup, 1u);
  EXPECT_LE(dims[0].d_tr, 4u);

  std::ostringstream csv;
  write_sobol_csv(doc, csv, 1);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "stratum_id,subset,sigma2");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("0,", 0), 0u);
  }
  EXPECT_EQ(rows, doc.at("stages")[0].at("strata")[0].at("sobol").size());
  EXPECT_THROW(write_sobol_csv(doc, csv, 5), SchemaError);
}

TEST(Report, RejectsForeignDocuments) {
  std::ostringstream out;
  EXPECT_THROW(write_report(nlohmann::json::parse(R"({"hello": 1})"), out), SchemaError);
  EXPECT_THROW(write_report(nlohmann::json::parse(R"({"format": "sslhs-trace", "version": 99, "stages": []})"), out),
               SchemaError);
}

TEST(Experiment, ParsesAllTables) {
  const auto exp = parse_experiment(R"(
workers = 2
[model]
problem = "p3"
d = 6
dprime = 2
radius = 0.35
c = 2.0
[run]
stages = 9
nbar = 40
seed = 12345
alpha = 0.95
score_mode = "first-order"
basis = "legendre"
max_degree = 3
[convergence]
schedule = [6, 10, 20]
reps = 30
methods = ["ss-lhs-gpc", "smc"]
[output]
dir = "out/p3"
)");
  EXPECT_EQ(exp.workers, 2u);
  EXPECT_EQ(exp.model.kind, ProblemKind::P3);
  EXPECT_EQ(exp.model.dim, 6u);
  EXPECT_EQ(exp.model.radius, 0.35);
  EXPECT_EQ(exp.model.radius2, 0.35);
  EXPECT_EQ(exp.model.c, 2.0);
  EXPECT_EQ(exp.run.stages, 9u);
  EXPECT_EQ(exp.run.nbar, 40u);
  EXPECT_EQ(exp.seed, 12345u);
  EXPECT_EQ(exp.run.alpha, 0.95);
  EXPECT_EQ(exp.run.score_mode, ScoreMode::FirstOrder);
  EXPECT_EQ(exp.run.basis, BasisConstruction::Legendre);
  EXPECT_EQ(exp.run.max_degree, 3u);
  EXPECT_EQ(exp.schedule, (std::vector<std::size_t>{6, 10, 20}));
  EXPECT_EQ(exp.reps, 30u);
  EXPECT_EQ(exp.methods, (std::vector<Method>{Method::SsLhsGpc, Method::Smc}));
  EXPECT_EQ(exp.out_dir, "out/p3");

  auto done = exp;
  done.finalize();
  EXPECT_EQ(done.run.dim, 6u);
  EXPECT_EQ(done.run.seed, 12345u);
}

TEST(Experiment, RejectsBadInput) {
  EXPECT_THROW(parse_experiment("[model]\nproblem = \"p1\"\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[extra]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[run]\nstages = \"six\"\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[run]\nstages = -1\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[run\nstages = 1\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[convergence]\nschedule = [6, 0]\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[convergence]\nmethods = [\"qmc\"]\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[run]\nscore_mode = \"max\"\n"), ConfigError);

  auto exp = parse_experiment("[model]\nproblem = \"p1\"\nd = 3\n");
  EXPECT_THROW(exp.finalize(), ConfigError);
  exp = parse_experiment("[convergence]\npreset = \"fig9\"\n");
  EXPECT_THROW(exp.finalize(), ConfigError);
}

TEST(Experiment, Presets) {
  EXPECT_EQ(preset_models("fig3").size(), 3u);
  const auto fig4 = preset_models("fig4");
  ASSERT_EQ(fig4.size(), 6u);
  EXPECT_EQ(fig4[2].dim, 10u);
  EXPECT_EQ(fig4[2].dprime, 2u);
  EXPECT_EQ(fig4[5].dprime, 3u);
  const auto fig5 = preset_models("fig5");
  ASSERT_EQ(fig5.size(), 3u);
  for (const auto& s : fig5) EXPECT_NO_THROW(s.validate());
}

TEST(Experiment, SeedFromEnvironment) {
  ::setenv("SSLHS_SEED", "18446744073709551615", 1);
  EXPECT_EQ(seed_from_environment(), 18446744073709551615ull);
  ::setenv("SSLHS_SEED", "12x", 1);
  EXPECT_THROW(seed_from_environment(), ConfigError);
  ::unsetenv("SSLHS_SEED");
  EXPECT_FALSE(seed_from_environment().has_value());
}
