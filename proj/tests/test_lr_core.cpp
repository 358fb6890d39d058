#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "markerlr/error.hpp"
#include "markerlr/lr_core.hpp"
#include "markerlr/simgen.hpp"
#include "markerlr/stats_math.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace markerlr;

namespace {

std::vector<double> two_clusters() {
  std::vector<double> x;
  const double jitter[] = {-1e-3, 0.0, 1e-3, -0.5e-3, 0.5e-3};
  for (int k = 0; k < 5; ++k) x.push_back(0.0 + jitter[k]);
  for (int k = 0; k < 5; ++k) x.push_back(10.0 + jitter[4 - k] * 0.8);
  return x;
}

} // namespace

TEST(FitPooledNormal, TwoSymmetricPoints) {
  const std::vector<double> x{0, 2};
  const auto f = fit_pooled_normal(x);
  EXPECT_DOUBLE_EQ(f.mu, 1.0);
  EXPECT_DOUBLE_EQ(f.sigma2, 1.0);
}

TEST(FitPooledNormal, ConstantIsDegenerate) {
  const std::vector<double> x{5, 5, 5, 5};
  EXPECT_THROW(fit_pooled_normal(x), DegenerateData);
}

TEST(FitPooledNormal, MatchesDirectFormula) {
  std::mt19937_64 g(20240601);
  const auto x = testutil::normal_sample(g, 20, 15.0, 2.23);
  const auto f = fit_pooled_normal(x);
  EXPECT_NEAR(f.mu, oracle::plain_mean(x), 1e-12);
  EXPECT_NEAR(f.sigma2, oracle::mle_variance(x), 1e-12);
  EXPECT_NEAR(f.loglik, oracle::pooled_loglik(x), 1e-9);
}

TEST(FitMixture, AllEqualIsDegenerate) {
  const std::vector<double> x(10, 3.0);
  EXPECT_THROW(fit_mixture_fixed_weights(x, 5, 5), DegenerateData);
}

TEST(FitMixture, TwoClustersReachLatticeOptimum) {
  const auto x = two_clusters();
  const auto fit = fit_mixture_fixed_weights(x, 5, 5);
  const double lo = std::min(fit.mu1, fit.mu2), hi = std::max(fit.mu1, fit.mu2);
  EXPECT_NEAR(lo, 0.0, 1e-2);
  EXPECT_NEAR(hi, 10.0, 1e-2);
  EXPECT_DOUBLE_EQ(fit.w1, 0.5);
  EXPECT_DOUBLE_EQ(fit.w2, 0.5);
  const auto pooled = fit_pooled_normal(x);
  EXPECT_GT(fit.loglik, pooled.loglik);

  const double v = oracle::mle_variance(x);
  const auto best = oracle::grid_search_mixture(x, 0.5, variance_floor(x), 2 * v);
  EXPECT_NEAR(fit.loglik, best.loglik, 1e-3);
}

TEST(FitMixture, EmEndsAtLocalMaximum) {
  std::mt19937_64 g(99);
  std::uniform_int_distribution<int> nd(2, 6);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n1 = nd(g), n2 = nd(g);
    const auto x = testutil::normal_sample(g, n1 + n2, 0.0, 1.0);
    const auto fit = fit_mixture_fixed_weights(x, n1, n2);
    const double w1 = double(n1) / (n1 + n2);
    EXPECT_NEAR(oracle::mixture_loglik(x, w1, {fit.mu1, fit.mu2, fit.sigma21, fit.sigma22}),
                fit.loglik, 1e-9);
    const auto nearby = oracle::polish_from(x, w1, {fit.mu1, fit.mu2, fit.sigma21, fit.sigma22},
                                            variance_floor(x), 4 * oracle::mle_variance(x));
    EXPECT_LE(nearby.loglik, fit.loglik + 1e-3) << "rep " << rep;
  }
}

TEST(FitMixture, NullDevianceBelowExtremeQuantile) {
  const double q999 = chi2_df2_upper_quantile(0.001);
  int within = 0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    std::mt19937_64 g(1000 + r);
    const auto x = testutil::normal_sample(g, 20, 15.0, 0.48);
    if (deviance_lr(x, 10, 10).value <= q999) ++within;
  }
  EXPECT_GE(within, 990);
}

TEST(FitMixture, ReportsNonConvergenceWithoutThrowing) {
  std::mt19937_64 g(5);
  const auto x = testutil::normal_sample(g, 12, 0, 1);
  EmOptions opt;
  opt.max_iterations = 1;
  const auto fit = fit_mixture_fixed_weights(x, 6, 6, opt);
  EXPECT_LE(fit.iterations, 1u);
  EXPECT_TRUE(std::isfinite(fit.loglik));
}

TEST(FitMixture, UnbalancedWeights) {
  std::mt19937_64 g(6);
  const auto x = testutil::normal_sample(g, 9, 0, 1);
  const auto fit = fit_mixture_fixed_weights(x, 3, 6);
  EXPECT_DOUBLE_EQ(fit.w1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(fit.w2, 2.0 / 3.0);
}

TEST(DevianceLr, PValueIsChiSquareTwoSurvival) {
  EXPECT_NEAR(deviance_p_value(-2 * std::log(0.05)), 0.05, 1e-15);
  EXPECT_NEAR(deviance_p_value(5.9915), 0.05, 1e-5);
  EXPECT_DOUBLE_EQ(deviance_p_value(0.0), 1.0);
}

TEST(DevianceLr, DegenerateGivesZeroAndOne) {
  const std::vector<double> x(10, 7.0);
  const auto s = deviance_lr(x, 5, 5);
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.value, 0.0);
  EXPECT_EQ(s.p_value, 1.0);
}

TEST(DevianceLr, NestedStartCannotLoseToPooled) {
  // A start placed on the pooled fit stays there: the mixture equals the
  // pooled model and the deviance is exactly zero.
  std::mt19937_64 g(11);
  const auto x = testutil::normal_sample(g, 10, 0, 1);
  const auto pooled = fit_pooled_normal(x);
  const auto fit = run_em(x, 0.5, {pooled.mu, pooled.mu, pooled.sigma2, pooled.sigma2});
  EXPECT_NEAR(fit.loglik, pooled.loglik, 1e-9);
  EXPECT_NEAR(std::max(0.0, 2 * (fit.loglik - pooled.loglik)), 0.0, 1e-8);
}

TEST(DevianceLr, TwoClustersHighlySignificant) {
  const auto s = deviance_lr(two_clusters(), 5, 5);
  EXPECT_LT(s.p_value, 1e-10);
  EXPECT_FALSE(s.degenerate);
}

TEST(ScoreMatrixLr, SingleProteinMatchesDeviance) {
  const auto x = two_clusters();
  const auto m = testutil::make_matrix({x}, 5, 5);
  const auto scores = score_matrix_lr(m);
  ASSERT_EQ(scores.size(), 1u);
  const auto direct = deviance_lr(x, 5, 5);
  EXPECT_EQ(scores[0].value, direct.value);
  EXPECT_EQ(scores[0].p_value, direct.p_value);
  EXPECT_EQ(scores[0].protein_id, "p0");
  EXPECT_EQ(scores[0].kind, StatisticKind::deviance_lr);
}

TEST(ScoreMatrixLr, SmallConditionsNeedOverride) {
  const auto m = testutil::make_matrix({{1, 2, 3, 4, 5, 6, 7, 8}}, 4, 4);
  EXPECT_THROW(score_matrix_lr(m), RegimeViolation);
  LrScoreOptions opt;
  opt.allow_small_samples = true;
  EXPECT_EQ(score_matrix_lr(m, opt).size(), 1u);
}

TEST(ScoreMatrixLr, ThreadCountDoesNotChangeOutput) {
  auto spec = preset("water-n10");
  spec.proteins = 200;
  spec.seed = 17;
  const auto lm = generate(spec);
  LrScoreOptions one, many;
  many.threads = 4;
  const auto a = score_matrix_lr(lm.matrix, one), b = score_matrix_lr(lm.matrix, many);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(a[j].value, b[j].value);
}

TEST(ScoreMatrixLr, DiagnosticsOnRequest) {
  const auto m = testutil::make_matrix({two_clusters()}, 5, 5);
  LrScoreOptions opt;
  opt.keep_diagnostics = true;
  const auto s = score_matrix_lr(m, opt);
  ASSERT_TRUE(s[0].diagnostics.has_value());
  EXPECT_NEAR(s[0].value,
              2 * (s[0].diagnostics->mixture.loglik - s[0].diagnostics->pooled.loglik), 1e-12);
}

TEST(ScoreMatrixLr, WaterBackgroundNullTail) {
  auto spec = preset("water-n10");
  spec.seed = 2024;
  const auto lm = generate(spec);
  const auto scores = score_matrix_lr(lm.matrix);
  const double q = chi2_df2_upper_quantile(0.05);
  std::size_t plain = 0, above = 0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (lm.is_true[j]) continue;
    ++plain;
    if (scores[j].value > q) ++above;
  }
  EXPECT_NEAR(double(above) / plain, 0.08, 0.03);
}

TEST(ScoreMatrixLr, PermutedLabelsCollapseTrueMarkers) {
  auto spec = preset("water-n10");
  spec.seed = 2025;
  const auto lm = generate(spec);
  auto layout = lm.matrix.layout();
  std::mt19937_64 g(3);
  std::shuffle(layout.begin(), layout.end(), g);
  const auto scores = score_matrix_lr(lm.matrix.with_layout(layout));
  std::vector<double> marker;
  for (std::size_t j = 0; j < scores.size(); ++j)
    if (lm.is_true[j]) marker.push_back(scores[j].value);
  std::sort(marker.begin(), marker.end());
  const double median = sorted_quantile(marker, 0.5);
  EXPECT_LT(median, chi2_df2_upper_quantile(0.5));
}

// Properties over random inputs.

class LrProperties : public ::testing::TestWithParam<int> {};

TEST_P(LrProperties, NestingAndMonotoneEm) {
  std::mt19937_64 g(GetParam());
  std::uniform_int_distribution<int> nd(2, 12);
  const std::size_t n1 = nd(g), n2 = nd(g);
  auto x = testutil::normal_sample(g, n1, 0, 1);
  const double shift = std::uniform_real_distribution<double>(-3, 3)(g);
  const auto y = testutil::normal_sample(g, n2, shift, 2.0);
  x.insert(x.end(), y.begin(), y.end());

  std::vector<double> trace;
  EmOptions opt;
  opt.check_monotone = true;
  opt.trace = &trace;
  const auto fit = fit_mixture_fixed_weights(x, n1, n2, opt);
  const auto pooled = fit_pooled_normal(x);
  EXPECT_GE(fit.loglik, pooled.loglik - 1e-8);
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1] - 1e-12);
  const double floor = variance_floor(x);
  EXPECT_GE(fit.sigma21, floor);
  EXPECT_GE(fit.sigma22, floor);
  EXPECT_NEAR(fit.w1 + fit.w2, 1.0, 1e-15);
}

TEST_P(LrProperties, LabelSwapSymmetry) {
  std::mt19937_64 g(GetParam() + 1000);
  std::uniform_int_distribution<int> nd(2, 10);
  const std::size_t n1 = nd(g), n2 = nd(g);
  auto a = testutil::normal_sample(g, n1, 0, 1);
  auto b = testutil::normal_sample(g, n2, 1.5, 1);
  std::vector<double> x = a, swapped = b;
  x.insert(x.end(), b.begin(), b.end());
  swapped.insert(swapped.end(), a.begin(), a.end());

  const auto f = fit_mixture_fixed_weights(x, n1, n2);
  auto s = fit_mixture_fixed_weights(swapped, n2, n1);
  // Equal weights make the components exchangeable; compare as an unordered pair.
  if (n1 == n2 && std::abs(f.mu1 - s.mu1) < std::abs(f.mu1 - s.mu2)) {
    std::swap(s.mu1, s.mu2);
    std::swap(s.sigma21, s.sigma22);
  }
  EXPECT_NEAR(f.mu1, s.mu2, 1e-9);
  EXPECT_NEAR(f.mu2, s.mu1, 1e-9);
  EXPECT_NEAR(f.sigma21, s.sigma22, 1e-9);
  EXPECT_NEAR(f.sigma22, s.sigma21, 1e-9);
  EXPECT_NEAR(deviance_lr(x, n1, n2).value, deviance_lr(swapped, n2, n1).value, 1e-9);
}

TEST_P(LrProperties, AffineInvariance) {
  std::mt19937_64 g(GetParam() + 2000);
  auto x = testutil::normal_sample(g, 8, 0, 1);
  const auto y = testutil::normal_sample(g, 8, 2, 0.7);
  x.insert(x.end(), y.begin(), y.end());
  const double a = std::uniform_real_distribution<double>(0.1, 10)(g) *
                   (GetParam() % 2 ? -1.0 : 1.0);
  const double b = std::uniform_real_distribution<double>(-50, 50)(g);
  std::vector<double> z(x.size());
  std::transform(x.begin(), x.end(), z.begin(), [&](double v) { return a * v + b; });
  EXPECT_NEAR(deviance_lr(x, 8, 8).value, deviance_lr(z, 8, 8).value, 1e-6);
}

TEST_P(LrProperties, ColumnOrderWithinConditionIrrelevant) {
  std::mt19937_64 g(GetParam() + 3000);
  auto x = testutil::normal_sample(g, 12, 0, 1);
  auto y = x;
  std::shuffle(y.begin(), y.begin() + 6, g);
  std::shuffle(y.begin() + 6, y.end(), g);
  EXPECT_NEAR(deviance_lr(x, 6, 6).value, deviance_lr(y, 6, 6).value, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, LrProperties, ::testing::Range(1, 41));
