#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace fraudscope {

struct PeriodOptions {
  int tolerance_days = 1;     // cluster radius around a gap value
  double min_support = 0.5;   // the winning cluster must cover this share of gaps
  int min_repeats = 2;        // ...and hold at least this many gaps
};

struct PeriodEstimate {
  std::optional<int> period_days;
  std::optional<double> support;  // set iff period_days is set
  std::vector<int> gaps;          // consecutive day gaps between distinct dates
};

/// Day gaps between consecutive distinct event dates.
inline std::vector<int> day_gaps(const EventSeries& series) {
  std::vector<Date> dates;
  dates.reserve(series.size());
  for (const auto& e : series.events) dates.push_back(date_of(e.timestamp));
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  std::vector<int> gaps;
  for (std::size_t i = 1; i < dates.size(); ++i) gaps.push_back(static_cast<int>((dates[i] - dates[i - 1]).count()));
  return gaps;
}

/// Dominant recurrence interval of a series.
///
/// Each distinct gap value g is a cluster centre; its cluster holds the gaps
/// within +-tolerance of g. The most populated cluster wins (smallest centre
/// on ties) and the period is the lower median of its gaps, reported only if
/// the cluster holds at least `min_support` of all gaps and at least
/// `min_repeats` gaps. A single month-long gap is not a repetition.
inline PeriodEstimate proper_period(const EventSeries& series, const PeriodOptions& opts = {}) {
  PeriodEstimate est;
  est.gaps = day_gaps(series);
  if (est.gaps.empty()) return est;

  std::vector<int> sorted = est.gaps;
  std::sort(sorted.begin(), sorted.end());
  std::size_t best_lo = 0, best_count = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), sorted[i] - opts.tolerance_days);
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), sorted[i] + opts.tolerance_days);
    auto count = static_cast<std::size_t>(hi - lo);
    if (count > best_count) {
      best_count = count;
      best_lo = static_cast<std::size_t>(lo - sorted.begin());
    }
  }
  double support = static_cast<double>(best_count) / static_cast<double>(sorted.size());
  if (support + 1e-12 < opts.min_support || best_count < static_cast<std::size_t>(std::max(opts.min_repeats, 1)))
    return est;
  est.period_days = sorted[best_lo + (best_count - 1) / 2];
  est.support = support;
  return est;
}

struct FitPoint {
  double x = 0;
  double y = 0;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double rmse = 0;
};

/// Ordinary least squares on mean-centred data.
inline LineFit fit_line(std::span<const FitPoint> pts) {
  if (pts.size() < 2) throw Error(ErrorCode::argument, "least-squares fit needs at least two points");
  const double n = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (sxx == 0) throw Error(ErrorCode::argument, "least-squares fit needs two distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& p : pts) {
    double r = p.y - (fit.intercept + fit.slope * p.x);
    ss += r * r;
  }
  fit.rmse = std::sqrt(ss / n);
  return fit;
}

/// Day-of-period plot of a series and its best-fitting line.
struct LeastSquaresFit {
  double slope = 0;       // days per event
  double intercept = 0;   // day of period
  double rmse = 0;        // days
  std::size_t n = 0;
  int period_days = 30;
  int phase_shift = 0;    // days added (mod period) to every y before fitting
  std::vector<FitPoint> points;  // as fitted, i.e. after the phase shift
};

inline constexpr int kMonthView = 30;

inline bool is_month_view(int period_days) { return period_days == 30 || period_days == 31; }

/// Fits y = day-of-period of event x (x = 1..n). For the 30/31-day views y
/// is the calendar day of month; otherwise it is the day offset from the
/// first event modulo the period, plus one.
///
/// A cluster straddling the period boundary (days 30, 1, 2, ...) looks like
/// noise to a naive fit, so the fit is also tried with y rotated by half a
/// period and the lower-error variant is kept.
inline LeastSquaresFit least_squares_fit(const EventSeries& series, int period_days = kMonthView) {
  if (period_days < 1) throw Error(ErrorCode::argument, "period must be at least one day");
  if (series.size() < 2) throw Error(ErrorCode::argument, "least-squares fit undefined for fewer than two events");

  const int modulus = is_month_view(period_days) ? 31 : period_days;
  const Date first = date_of(series.events.front().timestamp);
  std::vector<int> raw;
  raw.reserve(series.size());
  for (const auto& e : series.events) {
    Date d = date_of(e.timestamp);
    if (is_month_view(period_days)) raw.push_back(static_cast<int>(day_of_month(d)));
    else raw.push_back(static_cast<int>(((d - first).count() % period_days + period_days) % period_days) + 1);
  }

  LeastSquaresFit best;
  bool have = false;
  for (int shift : {0, modulus / 2}) {
    std::vector<FitPoint> pts;
    pts.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      pts.push_back({static_cast<double>(i + 1), static_cast<double>((raw[i] - 1 + shift) % modulus + 1)});
    LineFit f = fit_line(pts);
    if (!have || f.rmse < best.rmse - 1e-12) {
      best = {f.slope, f.intercept, f.rmse, pts.size(), period_days, shift, std::move(pts)};
      have = true;
    }
  }
  return best;
}

struct PeriodicTolerance {
  double slope = 0.1;  // days per event
  double rmse = 2.0;   // days
};

/// A flat line that actually fits the points suggests a recurring day.
inline bool periodic_indicator(const LeastSquaresFit& fit, const PeriodicTolerance& tol = {}) {
  return std::abs(fit.slope) <= tol.slope && fit.rmse <= tol.rmse;
}

}  // namespace fraudscope
