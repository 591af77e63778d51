#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "sslhs/errors.hpp"
#include "sslhs/estimators.hpp"
#include "sslhs/problems.hpp"

using namespace sslhs;

namespace {

constexpr double kQuarterDisc = 0.12566370614359174;  // pi * 0.4^2 / 4

Stratification random_refinement(std::size_t dim, std::size_t size, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Stratification strat = Stratification::trivial(dim);
  while (strat.size() < size) strat = strat.bisect(strat.strata()[gen() % strat.size()].id, gen() % dim);
  return strat;
}

StratumStats stats(double p, double sd, std::size_t n) {
  StratumStats s;
  s.probability = p;
  s.std_dev = sd;
  s.samples = n;
  return s;
}

std::vector<double> random_simplex(std::size_t n, std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) sum += (x = e(gen));
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace

TEST(StageEstimate, ConstantModel) {
  const Model f = [](std::span<const double>) { return 2.5; };
  const auto est = stage_estimate(random_refinement(3, 6, 1), f, 50, 4, 9);
  EXPECT_DOUBLE_EQ(est.estimate, 2.5);
  EXPECT_EQ(est.variance, 0.0);
  EXPECT_EQ(est.samples, 300u);
  EXPECT_EQ(est.stage, 4u);
}

TEST(StageEstimate, TrivialStratificationIsPlainLhsMean) {
  const Model f = [](std::span<const double> y) { return std::sin(y[0]) * y[1]; };
  const auto est = stage_estimate(Stratification::trivial(2), f, 50, 1, 77);
  RngStream rng = derive_stream(77, 1, 0);
  const auto batch = lhs_sample(HyperRectangle::unit(2), 50, rng);
  double mean = 0.0;
  for (std::size_t j = 0; j < 50; ++j) mean += f(batch.point(j));
  EXPECT_NEAR(est.estimate, mean / 50, 1e-15);
  ASSERT_EQ(est.strata.size(), 1u);
  EXPECT_EQ(est.strata[0].samples, 50u);
}

TEST(StageEstimate, WorkersDoNotChangeResult) {
  const Model f = [](std::span<const double> y) { return eval_p1(y, 0.3, 0.1); };
  const auto strat = random_refinement(2, 12, 3);
  const auto a = stage_estimate(strat, f, 50, 2, 5, {BasisConstruction::Stieltjes, 1, std::nullopt});
  const auto b = stage_estimate(strat, f, 50, 2, 5, {BasisConstruction::Stieltjes, 4, std::nullopt});
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.variance, b.variance);
  for (std::size_t i = 0; i < a.strata.size(); ++i) EXPECT_EQ(a.strata[i].surrogate.coefficients, b.strata[i].surrogate.coefficients);
}

TEST(StageEstimate, ModelFailureIsReported) {
  const Model f = [](std::span<const double> y) { return y[0] > 0.5 ? std::nan("") : 1.0; };
  EXPECT_THROW(stage_estimate(Stratification::trivial(2), f, 20, 1, 0), ModelError);
}

// Grand means over 100 seeds sit within 4 standard errors of the truth for
// stratifications of size 1, 6 and 20.
TEST(StageEstimate, Unbiased) {
  const Model quarter = [](std::span<const double> y) { return eval_p2(y, 2, 0.4, 1.0); };
  const Model poly = [](std::span<const double> y) { return y[0] * y[0] + y[1]; };
  const std::pair<const Model*, double> cases[] = {{&quarter, kQuarterDisc}, {&poly, 1.0 / 3.0 + 0.5}};
  for (const auto& [model, truth] : cases) {
    for (std::size_t size : {1u, 6u, 20u}) {
      const auto strat = random_refinement(2, size, size);
      const std::size_t reps = 100;
      double sum = 0.0, sum2 = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double e = stage_estimate(strat, *model, 50, 1, 1000 + r).estimate;
        sum += e;
        sum2 += e * e;
      }
      const double mean = sum / reps;
      const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
      EXPECT_NEAR(mean, truth, 4 * se + 1e-15) << "size " << size;
    }
  }
}

TEST(StageVariance, Formula) {
  const std::vector<StratumStats> one{stats(1.0, 2.0, 50)};
  EXPECT_DOUBLE_EQ(stage_variance(one), 0.08);
  const std::vector<StratumStats> two{stats(0.5, 1.0, 50), stats(0.5, 1.0, 50)};
  EXPECT_DOUBLE_EQ(stage_variance(two), 0.01);
  const std::vector<StratumStats> flat{stats(0.25, 0.0, 50), stats(0.75, 0.0, 50)};
  EXPECT_EQ(stage_variance(flat), 0.0);
}

TEST(StageVariance, MatchesConstantAllocationForm) {
  const Model f = [](std::span<const double> y) { return eval_p1(y, 0.3, 0.01); };
  const auto est = stage_estimate(random_refinement(2, 9, 4), f, 50, 3, 1);
  double alt = 0.0;
  for (const auto& s : est.strata) alt += s.probability * s.probability * s.std_dev * s.std_dev;
  EXPECT_NEAR(est.variance, alt / 50, 1e-15 * alt);
}

TEST(OptimalWeights, Examples) {
  EXPECT_EQ(optimal_weights(std::vector<double>{1, 1}), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(optimal_weights(std::vector<double>{1, 3}), (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(optimal_weights(std::vector<double>{2, 0, 5}), (std::vector<double>{0, 1, 0}));
  // latest zero-variance stage wins
  EXPECT_EQ(optimal_weights(std::vector<double>{0, 3, 0, 1}), (std::vector<double>{0, 0, 1, 0}));
  EXPECT_EQ(optimal_weights(std::vector<double>{4}), (std::vector<double>{1}));
  EXPECT_THROW(optimal_weights(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(optimal_weights(std::vector<double>{1, -1}), std::invalid_argument);
  EXPECT_THROW(optimal_weights(std::vector<double>{1, std::nan("")}), std::invalid_argument);
}

TEST(OptimalWeights, MinimiseCombinedVariance) {
  std::mt19937_64 gen(12);
  std::lognormal_distribution<double> lv(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t L = 1 + gen() % 6;
    std::vector<double> v(L);
    for (double& x : v) x = lv(gen);
    const auto w = optimal_weights(v);
    double sum = 0.0, inv = 0.0, var = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      EXPECT_GE(w[l], 0.0);
      sum += w[l];
      inv += 1.0 / v[l];
      var += w[l] * w[l] * v[l];
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
    EXPECT_NEAR(var, 1.0 / inv, 1e-12 * var);
    for (int probe = 0; probe < 20; ++probe) {
      const auto a = random_simplex(L, gen);
      double pv = 0.0;
      for (std::size_t l = 0; l < L; ++l) pv += a[l] * a[l] * v[l];
      EXPECT_LE(var, pv * (1 + 1e-12));
    }
  }
}

TEST(Combine, Examples) {
  const std::vector<double> mu{0, 2}, v{1, 1};
  const auto e = combine(mu, v, optimal_weights(v));
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_DOUBLE_EQ(e.variance, 0.5);

  const std::vector<double> one_mu{3.5}, one_v{0.2}, one_w{1.0};
  const auto single = combine(one_mu, one_v, one_w);
  EXPECT_DOUBLE_EQ(single.value, 3.5);
  EXPECT_DOUBLE_EQ(single.variance, 0.2);

  const std::vector<double> bad_w{0.6, 0.6};
  EXPECT_THROW(combine(mu, v, bad_w), std::invalid_argument);
  const std::vector<double> short_w{1.0};
  EXPECT_THROW(combine(mu, v, short_w), std::invalid_argument);
}

// Weighting two plain Monte Carlo estimators by inverse variance gives
// sample-size proportional weights.
TEST(Combine, TwoSmcStagesWeightBySampleSize) {
  const double sigma2 = 0.7;
  const double m1 = 300, m2 = 900;
  const auto w = optimal_weights(std::vector<double>{sigma2 / m1, sigma2 / m2});
  EXPECT_NEAR(w[0], m1 / (m1 + m2), 1e-15);
  EXPECT_NEAR(w[1], m2 / (m1 + m2), 1e-15);
}

TEST(SmcEstimate, Basics) {
  const Model c = [](std::span<const double>) { return -1.25; };
  RngStream r0(1);
  const auto rc = smc_estimate(c, 3, 10, r0);
  EXPECT_DOUBLE_EQ(rc.mean, -1.25);
  EXPECT_EQ(rc.variance, 0.0);

  const Model y1 = [](std::span<const double> y) { return y[0]; };
  const std::size_t n = 100000;
  RngStream r1(2);
  EXPECT_NEAR(smc_estimate(y1, 2, n, r1).mean, 0.5, 5 * std::sqrt(1.0 / (12.0 * n)));

  RngStream a(3), b(3);
  EXPECT_EQ(smc_estimate(y1, 2, 100, a).mean, smc_estimate(y1, 2, 100, b).mean);
  EXPECT_THROW(smc_estimate(y1, 2, 1, a), std::invalid_argument);
}

TEST(LhsEstimate, Basics) {
  const Model c = [](std::span<const double>) { return 4.0; };
  RngStream r0(1);
  EXPECT_DOUBLE_EQ(lhs_estimate(c, 5, 37, r0), 4.0);

  const Model y1 = [](std::span<const double> y) { return y[0]; };
  RngStream a(8), b(8);
  const double single = lhs_estimate(y1, 1, 1, a);
  EXPECT_EQ(single, b.uniform());
}

// For additive functions LHS removes the main-effect variance entirely.
TEST(LhsEstimate, AdditiveFunctionVarianceFarBelowSmc) {
  const std::size_t dim = 4, n = 100, reps = 1000;
  const Model f = [](std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v;
    return s;
  };
  double ss = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng = derive_stream(r, 0, 0);
    const double e = lhs_estimate(f, dim, n, rng) - 0.5 * dim;
    ss += e * e;
  }
  const double smc_var = (dim / 12.0) / n;
  EXPECT_LT(ss / reps, smc_var / 10);
}
