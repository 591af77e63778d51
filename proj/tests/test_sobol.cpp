#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sslhs/gpc.hpp"
#include "sslhs/sampling.hpp"
#include "sslhs/sobol.hpp"
#include "support/anova_oracle.hpp"

using namespace sslhs;

namespace {

SobolDecomposition make(std::size_t dim, std::map<SubsetMask, double> mass) {
  SobolDecomposition dec{0, dim, 0.0, std::move(mass)};
  for (const auto& [m, v] : dec.contributions) dec.total_variance += v;
  return dec;
}

GpcSurrogate surrogate_with(const std::vector<std::pair<std::vector<int>, double>>& terms) {
  const auto rect = HyperRectangle::unit(2);
  const auto indices = MultiIndexSet::total_degree(2, 2);
  GpcSurrogate s{0, rect, indices, std::vector<double>(indices.size(), 0.0), local_bases(rect, 2), false};
  for (const auto& [m, c] : terms) {
    for (std::size_t i = 0; i < indices.size(); ++i)
      if (indices[i] == m) s.coefficients[i] = c;
  }
  return s;
}

}  // namespace

TEST(SobolFromGpc, IndexPatternGrouping) {
  const double c0 = 0.7, a = 0.3, b = -1.2, e = 0.4;
  const auto s = surrogate_with({{{0, 0}, c0}, {{1, 0}, a}, {{2, 0}, b}, {{1, 1}, e}});
  const auto dec = sobol_from_gpc(s);
  EXPECT_DOUBLE_EQ(dec.contribution(0b01), a * a + b * b);
  EXPECT_DOUBLE_EQ(dec.contribution(0b11), e * e);
  EXPECT_DOUBLE_EQ(dec.contribution(0b10), 0.0);
  EXPECT_DOUBLE_EQ(dec.total_variance, a * a + b * b + e * e);
}

TEST(SobolFromGpc, AdditiveLinearFunction) {
  const auto rect = HyperRectangle::unit(2);
  RngStream rng(4);
  const auto batch = lhs_sample(rect, 50, rng);
  std::vector<double> values;
  for (std::size_t j = 0; j < batch.n; ++j) values.push_back(batch.point(j)[0] + batch.point(j)[1]);
  const auto dec = sobol_from_gpc(fit_gpc(batch, values, rect, total_degree_index_set(2, 50)));
  EXPECT_NEAR(dec.contribution(0b01), 1.0 / 12, 1e-10);
  EXPECT_NEAR(dec.contribution(0b10), 1.0 / 12, 1e-10);
  EXPECT_NEAR(dec.contribution(0b11), 0.0, 1e-10);
  const auto scores = dimension_scores(dec);
  EXPECT_NEAR(scores[0], 1.0 / 12, 1e-10);
  EXPECT_NEAR(scores[1], 1.0 / 12, 1e-10);
}

TEST(SobolFromGpc, ConstantSurrogateIsEmpty) {
  const auto dec = sobol_from_gpc(surrogate_with({{{0, 0}, 5.0}}));
  EXPECT_TRUE(dec.contributions.empty());
  EXPECT_EQ(dec.total_variance, 0.0);
  EXPECT_EQ(dimension_scores(dec), std::vector<double>(2, 0.0));
  EXPECT_EQ(effective_dim_superposition(dec, 0.99), 0u);
  EXPECT_EQ(effective_dim_truncation(dec, 0.99), 0u);
}

TEST(SobolFromGpc, MatchesNestedQuadratureOracle) {
  std::mt19937_64 gen(31337);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 2;
    const auto s = oracle::random_polynomial(d, 4, gen);
    const auto dec = sobol_from_gpc(s);
    const auto ref = oracle::anova_variances(s, 6);
    for (const auto& [mask, var] : ref) EXPECT_NEAR(dec.contribution(mask), var, 1e-8) << "mask " << mask;
    double sum = 0.0;
    for (const auto& [mask, var] : dec.contributions) sum += var;
    EXPECT_EQ(sum, dec.total_variance);
  }
}

TEST(EffectiveDimension, Superposition) {
  EXPECT_EQ(effective_dim_superposition(make(3, {{0b001, 1.0}, {0b010, 2.0}, {0b100, 0.5}}), 1.0), 1u);
  const auto dec = make(2, {{0b01, 0.5}, {0b11, 0.5}});
  EXPECT_EQ(effective_dim_superposition(dec, 0.99), 2u);
  EXPECT_EQ(effective_dim_superposition(dec, 0.5), 1u);
  EXPECT_THROW(effective_dim_superposition(dec, 0.0), std::invalid_argument);
  EXPECT_THROW(effective_dim_superposition(dec, 1.5), std::invalid_argument);
}

TEST(EffectiveDimension, Truncation) {
  EXPECT_EQ(effective_dim_truncation(make(5, {{SubsetMask{1} << 4, 1.0}}), 0.99), 5u);
  EXPECT_EQ(effective_dim_truncation(make(10, {{0b01, 0.7}, {0b10, 0.3}}), 0.99), 2u);
  // two blocks of two interacting dims each, as in P3 with d' = 2
  const auto p3_like = make(10, {{0b0001, 1}, {0b0010, 1}, {0b0011, 0.5}, {0b0100, 1}, {0b1000, 1}, {0b1100, 0.5}});
  EXPECT_EQ(effective_dim_truncation(p3_like, 0.99), 4u);
  EXPECT_EQ(effective_dim_superposition(p3_like, 0.99), 2u);
}

TEST(DimensionScores, TotalAndFirstOrder) {
  const double e2 = 0.09;
  const auto inter = make(2, {{0b11, e2}});
  EXPECT_EQ(dimension_scores(inter, ScoreMode::Total), (std::vector<double>{e2, e2}));
  EXPECT_EQ(dimension_scores(inter, ScoreMode::FirstOrder), (std::vector<double>{0.0, 0.0}));

  const auto mixed = make(3, {{0b001, 1.0}, {0b110, 2.0}, {0b101, 4.0}});
  EXPECT_EQ(dimension_scores(mixed, ScoreMode::Total), (std::vector<double>{5.0, 2.0, 6.0}));
  EXPECT_EQ(dimension_scores(mixed, ScoreMode::FirstOrder), (std::vector<double>{1.0, 0.0, 0.0}));
}

// Relabelling dimensions of the surrogate permutes the scores accordingly.
TEST(DimensionScores, EquivariantUnderRelabelling) {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 10; ++t) {
    const auto s = oracle::random_polynomial(3, 3, gen);
    std::vector<std::size_t> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), gen);

    std::vector<std::vector<int>> idx;
    for (const auto& m : s.indices.indices()) {
      std::vector<int> q(3);
      for (std::size_t k = 0; k < 3; ++k) q[perm[k]] = m[k];
      idx.push_back(q);
    }
    std::vector<double> lo(3), hi(3);
    for (std::size_t k = 0; k < 3; ++k) {
      lo[perm[k]] = s.rect.lower(k);
      hi[perm[k]] = s.rect.upper(k);
    }
    const HyperRectangle rect(lo, hi);
    GpcSurrogate r{0, rect, MultiIndexSet(3, idx), s.coefficients, local_bases(rect, s.indices.max_degree()), false};

    const auto a = dimension_scores(sobol_from_gpc(s));
    const auto b = dimension_scores(sobol_from_gpc(r));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(b[perm[k]], a[k], 1e-13 * (1.0 + a[k]));
  }
}
