#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "markerlr/error.hpp"
#include "markerlr/eval.hpp"
#include "markerlr/lr_core.hpp"
#include "markerlr/select.hpp"
#include "markerlr/simgen.hpp"

using namespace markerlr;

namespace {

std::vector<ProteinScore> from_values(const std::vector<double> &v,
                                      StatisticKind kind = StatisticKind::deviance_lr) {
  std::vector<ProteinScore> s;
  for (std::size_t j = 0; j < v.size(); ++j) {
    ProteinScore p;
    p.protein_id = "p" + std::to_string(j + 1);
    p.kind = kind;
    p.value = v[j];
    p.p_value = kind == StatisticKind::deviance_lr ? deviance_p_value(v[j]) : 0.5;
    s.push_back(p);
  }
  return s;
}

std::vector<ProteinScore> from_pvalues(const std::vector<double> &p) {
  std::vector<ProteinScore> s;
  for (std::size_t j = 0; j < p.size(); ++j) {
    ProteinScore v;
    v.protein_id = "p" + std::to_string(j + 1);
    v.p_value = p[j];
    v.value = -2 * std::log(p[j]);
    s.push_back(v);
  }
  return s;
}

std::vector<double> cliff() {
  std::vector<double> v{50, 48, 47};
  for (int i = 0; i < 40; ++i) v.push_back(2.0 - 0.04 * i);
  return v;
}

} // namespace

TEST(SelectFixed, TiesIncluded) {
  const auto r = select_fixed(from_values({0.1, 3.0, 2.5}), {2.5, CutoffScale::deviance});
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(r.selected_ids, (std::vector<std::string>{"p2", "p3"}));
  EXPECT_DOUBLE_EQ(r.cutoff_used, 2.5);
  EXPECT_EQ(r.universe, 3u);
}

TEST(SelectFixed, AllBelowIsEmpty) {
  EXPECT_TRUE(select_fixed(from_values({0.1, 0.2, 1.0}), {2.5, CutoffScale::deviance})
                  .selected.empty());
}

TEST(SelectFixed, ScaleConversion) {
  const auto s = from_values({1.0, 4.0, 6.0});
  // lnR = deviance / 2, R = exp(deviance / 2)
  EXPECT_EQ(select_fixed(s, {2.5, CutoffScale::ln_r}).selected, (std::vector<std::size_t>{2}));
  EXPECT_EQ(select_fixed(s, {std::exp(1.5), CutoffScale::r}).selected,
            (std::vector<std::size_t>{1, 2}));
  EXPECT_NEAR(cutoff_on_statistic_scale({2.5, CutoffScale::r}, StatisticKind::deviance_lr),
              2 * std::log(2.5), 1e-15);
  EXPECT_THROW(cutoff_on_statistic_scale({2.5, CutoffScale::ln_r}, StatisticKind::ks_d),
               ConfigError);
}

TEST(SelectFixed, RejectsNonPositiveCutoff) {
  EXPECT_THROW(select_fixed(from_values({1.0}), {0.0, CutoffScale::deviance}), ConfigError);
}

TEST(SelectGap, SingleCliff) {
  const auto r = select_gap(from_values(cliff()), {});
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(r.cutoff_used, 47.0);
  ASSERT_GE(r.sorted_preview.size(), 3u);
  EXPECT_EQ(r.sorted_preview[0].value, 50.0);
}

TEST(SelectGap, GeometricDecayHasNoGap) {
  std::vector<double> v;
  for (int i = 0; i < 200; ++i) v.push_back(100.0 * std::pow(1.05, -i));
  EXPECT_THROW(select_gap(from_values(v), {}), NoGapFound);
}

TEST(SelectGap, FlatHasNoGap) {
  EXPECT_THROW(select_gap(from_values(std::vector<double>(50, 3.0)), {}), NoGapFound);
}

TEST(SelectGap, TiesBrokenBySmallerIndex) {
  // Two equal cliffs: the earlier one wins.
  std::vector<double> v{40, 39, 10, 9.75, 2.5, 2.44};
  for (int i = 0; i < 20; ++i) v.push_back(1.0 - 0.01 * i);
  const auto r = select_gap(from_values(v), {});
  EXPECT_EQ(r.selected.size(), 2u);
}

TEST(SelectGap, WindowLimitsSearch) {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(100 - i);
  for (int i = 0; i < 10; ++i) v.push_back(10 - 0.1 * i);
  EXPECT_EQ(select_gap(from_values(v), {100}).selected.size(), 10u);
  EXPECT_THROW(select_gap(from_values(v), {8}), NoGapFound);
  EXPECT_THROW(select_gap(from_values(v), {1}), ConfigError);
}

TEST(SelectGap, WelchRanksOnAbsoluteT) {
  const auto r = select_gap(from_values({-30, 29, 1.0, -0.9, 0.8, 0.7, 0.6, -0.5},
                                        StatisticKind::welch_t),
                            {});
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
}

TEST(SelectGap, WaterBackgroundRecoversPlantedCount) {
  auto spec = preset("water-n10");
  spec.seed = 404;
  const auto lm = generate(spec);
  const auto scores = score_matrix_lr(lm.matrix);
  std::size_t selected = 0;
  try {
    selected = select_gap(scores, {}).selected.size();
  } catch (const NoGapFound &) {
  }
  EXPECT_NEAR(double(selected), 30.0, 2.0);
}

TEST(SelectFixed, MatchedSimulationOfTwelveMarkers) {
  auto spec = preset("water-n10");
  spec.true_markers = 12;
  spec.per_condition = 12;
  spec.seed = 12;
  const auto lm = generate(spec);
  const auto r = select_fixed(score_matrix_lr(lm.matrix), {2.5, CutoffScale::deviance});
  std::size_t tp = 0;
  for (auto j : r.selected) tp += lm.is_true[j];
  EXPECT_NEAR(double(r.selected.size()), 13.0, 2.0);
  EXPECT_GE(tp, 12u);
}

TEST(SelectBh, HandChecked) {
  const auto r = select_bh(from_pvalues({0.001, 0.2, 0.9}), {0.05});
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0}));
  EXPECT_DOUBLE_EQ(r.cutoff_used, 0.001);
}

TEST(SelectBh, StepUp) {
  // p_(3) = 0.03 <= 3 * 0.05 / 4 even though p_(2) = 0.025 > 2 * 0.05 / 4.
  const auto r = select_bh(from_pvalues({0.03, 0.001, 0.025, 0.8}), {0.05});
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(SelectBh, AllOnesEmpty) {
  EXPECT_TRUE(select_bh(from_pvalues({1, 1, 1, 1}), {0.05}).selected.empty());
}

TEST(SelectBh, RejectsBadLevel) {
  EXPECT_THROW(select_bh(from_pvalues({0.5}), {1.0}), ConfigError);
}

TEST(SelectBh, NullFalseSelectionsBelowLevel) {
  // Pure-null uniform p-values: expected false selections <= q * p.
  double total = 0;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> p(1000);
    for (auto &v : p) v = u(g);
    total += double(select_bh(from_pvalues(p), {0.05}).selected.size());
  }
  EXPECT_LE(total / 50, 0.05 * 1000);
}

TEST(SelectBh, RealizedFdrOnNullDominantSimulations) {
  double fdr = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto spec = preset("water-n10");
    spec.seed = 900 + seed;
    const auto lm = generate(spec);
    const auto r = select_bh(ttest_baseline(lm.matrix), {0.05});
    std::size_t fp = 0;
    for (auto j : r.selected) fp += !lm.is_true[j];
    fdr += double(fp) / double(std::max<std::size_t>(1, r.selected.size()));
  }
  EXPECT_LE(fdr / 50, 0.05 + 0.03);
}

TEST(ParsePolicy, Forms) {
  EXPECT_TRUE(std::holds_alternative<GapKnee>(parse_policy("gap")));
  EXPECT_EQ(std::get<GapKnee>(parse_policy("gap:50")).top_window, 50u);
  EXPECT_DOUBLE_EQ(std::get<BhFdr>(parse_policy("bh:0.1")).q, 0.1);
  const auto f = std::get<FixedCutoff>(parse_policy("fixed:2.5", CutoffScale::ln_r));
  EXPECT_DOUBLE_EQ(f.cutoff, 2.5);
  EXPECT_EQ(f.scale, CutoffScale::ln_r);
  EXPECT_THROW(parse_policy("fixed:-1"), ConfigError);
  EXPECT_THROW(parse_policy("bh:2"), ConfigError);
  EXPECT_THROW(parse_policy("gap:1"), ConfigError);
  EXPECT_THROW(parse_policy("knee"), ConfigError);
  EXPECT_EQ(parse_cutoff_scale("lnR"), CutoffScale::ln_r);
  EXPECT_EQ(parse_cutoff_scale("R"), CutoffScale::r);
}

// Properties

class SelectProperties : public ::testing::TestWithParam<int> {};

TEST_P(SelectProperties, PermutationInvariance) {
  std::mt19937_64 g(GetParam());
  auto v = cliff();
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < 60; ++i) v.push_back(e(g));
  const auto base = from_values(v);
  auto shuffled = base;
  std::shuffle(shuffled.begin(), shuffled.end(), g);
  auto ids = [](const SelectionResult &r) {
    auto x = r.selected_ids;
    std::sort(x.begin(), x.end());
    return x;
  };
  for (const SelectionPolicy &p :
       {SelectionPolicy{FixedCutoff{2.5}}, SelectionPolicy{GapKnee{}}, SelectionPolicy{BhFdr{0.05}}})
    EXPECT_EQ(ids(select(base, p)), ids(select(shuffled, p)));
}

TEST_P(SelectProperties, RaisingAStatisticKeepsItSelected) {
  std::mt19937_64 g(GetParam() + 100);
  auto v = cliff();
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < 60; ++i) v.push_back(e(g));
  const auto base = from_values(v);
  const auto gap = select_gap(base, {});
  for (auto j : gap.selected) {
    auto raised = v;
    raised[j] += std::uniform_real_distribution<double>(0, 20)(g);
    const auto r = select_fixed(from_values(raised), {gap.cutoff_used});
    EXPECT_TRUE(std::ranges::binary_search(r.selected, j));
  }
  const auto fixed = select_fixed(base, {2.5});
  for (auto j : fixed.selected) {
    auto raised = v;
    raised[j] *= 1.5;
    EXPECT_TRUE(std::ranges::binary_search(select_fixed(from_values(raised), {2.5}).selected, j));
  }
}

TEST_P(SelectProperties, FixedSelectionIsThresholdSet) {
  std::mt19937_64 g(GetParam() + 200);
  std::vector<double> v(80);
  std::exponential_distribution<double> e(0.5);
  for (auto &x : v) x = e(g);
  const auto r = select_fixed(from_values(v), {2.0});
  for (std::size_t j = 0; j < v.size(); ++j)
    EXPECT_EQ(std::ranges::binary_search(r.selected, j), v[j] >= 2.0);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SelectProperties, ::testing::Range(0, 20));
