#include "support.hpp"

#include <gtest/gtest.h>

using namespace fstest;

namespace {

EventSeries days_of_2014(std::vector<int> days) {
  for (auto& d : days) d -= 1;
  return series_at_offsets(days);
}

// Independent normal-equation solution in long double.
std::pair<long double, long double> normal_equations(const std::vector<FitPoint>& pts) {
  long double n = pts.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
    sxx += static_cast<long double>(p.x) * p.x;
    sxy += static_cast<long double>(p.x) * p.y;
  }
  long double det = n * sxx - sx * sx;
  return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

}  // namespace

TEST(ProperPeriod, ConstantGaps) {
  auto est = proper_period(days_of_2014({1, 29, 57, 85}));
  ASSERT_TRUE(est.period_days);
  EXPECT_EQ(*est.period_days, 28);
  EXPECT_DOUBLE_EQ(*est.support, 1.0);
}

TEST(ProperPeriod, ClusterWithOutlier) {
  auto est = proper_period(days_of_2014({1, 29, 58, 86, 100}));
  EXPECT_EQ(est.gaps, (std::vector<int>{28, 29, 28, 14}));
  ASSERT_TRUE(est.period_days);
  EXPECT_EQ(*est.period_days, 28);
  EXPECT_DOUBLE_EQ(*est.support, 0.75);
}

TEST(ProperPeriod, NoDominantGap) {
  auto est = proper_period(days_of_2014({1, 4, 20, 21}));
  EXPECT_FALSE(est.period_days);
  EXPECT_FALSE(est.support);
}

TEST(ProperPeriod, FewerThanTwoDistinctDays) {
  EXPECT_FALSE(proper_period(days_of_2014({5})).period_days);
  EXPECT_FALSE(proper_period(series_on("c1", {"2014-01-01T08:00", "2014-01-01T18:00"})).period_days);
  EXPECT_FALSE(proper_period(EventSeries{"c1", {}}).period_days);
}

TEST(ProperPeriod, SingleGapIsNotARepeat) {
  EXPECT_FALSE(proper_period(days_of_2014({1, 29})).period_days);
  PeriodOptions lenient;
  lenient.min_repeats = 1;
  EXPECT_EQ(proper_period(days_of_2014({1, 29}), lenient).period_days, 28);
}

TEST(ProperPeriod, TranslationInvariantAndConstantGapProperty) {
  Random r(41);
  for (int round = 0; round < 200; ++round) {
    std::vector<int> offs{0};
    int n = r.between(1, 15);
    bool constant = r.chance(0.3);
    int g = r.between(1, 40);
    for (int i = 0; i < n; ++i) offs.push_back(offs.back() + (constant ? g : r.between(1, 40)));
    auto base = proper_period(series_at_offsets(offs));
    if (constant && n >= 2) {
      ASSERT_EQ(base.period_days, g);
      ASSERT_EQ(base.support, 1.0);
    }
    int k = r.between(-500, 500);
    auto moved = proper_period(series_at_offsets(offs, day("2014-01-01") + std::chrono::days{k}));
    ASSERT_EQ(moved.period_days, base.period_days);
    ASSERT_EQ(moved.support, base.support);
  }
}

TEST(LeastSquares, ConstantDayOfMonth) {
  auto fit = least_squares_fit(series_on("c1", {"2014-01-15T10:00", "2014-02-15T10:00", "2014-03-15T10:00"}));
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 15.0, 1e-12);
  EXPECT_NEAR(fit.rmse, 0.0, 1e-12);
  EXPECT_TRUE(periodic_indicator(fit));
}

TEST(LeastSquares, HandSolvedLine) {
  std::vector<FitPoint> pts{{1, 10}, {2, 12}, {3, 14}, {4, 16}};
  auto f = fit_line(pts);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 8.0, 1e-12);
  EXPECT_NEAR(f.rmse, 0.0, 1e-12);
  // Same values as days of month in one series.
  auto fit = least_squares_fit(series_on("c1", {"2014-01-10T10:00", "2014-02-12T10:00", "2014-03-14T10:00",
                                                "2014-04-16T10:00"}));
  EXPECT_EQ(fit.phase_shift, 0);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 8.0, 1e-12);
}

TEST(LeastSquares, WrapAroundUsesPhaseShift) {
  auto fit = least_squares_fit(series_on("c1", {"2014-01-30T10:00", "2014-03-01T10:00", "2014-03-31T10:00",
                                                "2014-05-01T10:00"}));
  EXPECT_NE(fit.phase_shift, 0);
  EXPECT_LT(fit.rmse, 1.0);
}

TEST(LeastSquares, Errors) {
  EXPECT_THROW(least_squares_fit(days_of_2014({1})), Error);
  EXPECT_THROW(least_squares_fit(days_of_2014({1, 2}), 0), Error);
  std::vector<FitPoint> same_x{{1, 1}, {1, 2}};
  EXPECT_THROW(fit_line(same_x), Error);
}

TEST(LeastSquares, RandomPointsMatchNormalEquations) {
  Random r(8);
  for (int round = 0; round < 100; ++round) {
    std::vector<FitPoint> pts;
    for (int i = 1; i <= 20; ++i) pts.push_back({static_cast<double>(i), r.uniform(1, 31)});
    auto f = fit_line(pts);
    auto [slope, intercept] = normal_equations(pts);
    EXPECT_NEAR(f.slope, static_cast<double>(slope), 1e-9);
    EXPECT_NEAR(f.intercept, static_cast<double>(intercept), 1e-9);
    double residual = 0;
    for (const auto& p : pts) residual += p.y - (f.slope * p.x + f.intercept);
    EXPECT_NEAR(residual, 0.0, 1e-9);
  }
}

TEST(PeriodicIndicator, ExamplesAndMonotonicity) {
  LeastSquaresFit f;
  EXPECT_TRUE(periodic_indicator(f));
  f.slope = 0.01;
  f.rmse = 9;
  EXPECT_FALSE(periodic_indicator(f));
  f.slope = 3;
  f.rmse = 0.5;
  EXPECT_FALSE(periodic_indicator(f));

  Random r(12);
  for (int i = 0; i < 1000; ++i) {
    f.slope = r.uniform(-1, 1);
    f.rmse = r.uniform(0, 5);
    PeriodicTolerance loose{r.uniform(0, 1), r.uniform(0, 5)};
    PeriodicTolerance tight{loose.slope * r.uniform(0, 1), loose.rmse * r.uniform(0, 1)};
    if (!periodic_indicator(f, loose)) {
      ASSERT_FALSE(periodic_indicator(f, tight));
    }
  }
}
