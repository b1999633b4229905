#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/digest.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fraudscope::render {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// 20-colour categorical palette shared by every view.
inline constexpr std::array<const char*, 20> kPalette{
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f", "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5"};

inline std::string color_key(std::string_view id) {
  return kPalette[fnv1a(id) % kPalette.size()];
}

enum class SpiralMode { offline, semi_online };

inline std::string_view to_string(SpiralMode m) { return m == SpiralMode::offline ? "offline" : "semi_online"; }

inline SpiralMode parse_spiral_mode(std::string_view s) {
  if (s == "offline") return SpiralMode::offline;
  if (s == "semi_online" || s == "semi-online") return SpiralMode::semi_online;
  throw Error(ErrorCode::argument, "unknown spiral mode", std::string(s));
}

struct SpiralConfig {
  int period_days = 30;        // 30/31: one calendar month per turn; otherwise a fixed day count
  double inner_radius = 40;    // r0
  double ring_spacing = 30;    // radial growth per turn
  SpiralMode mode = SpiralMode::offline;
  bool color_by_employee = false;

  bool month_view() const { return period_days == 30 || period_days == 31; }
  /// Angular divisions per turn.
  int divisions() const { return period_days; }
};

/// Angle of the division a day falls in. In the 30-division month view day
/// 31 shares the last division, half a step past day 30.
inline double day_angle(int day_index, int divisions) {
  if (day_index > divisions) return kTwoPi * (divisions - 0.5) / divisions;
  return kTwoPi * (day_index - 1) / divisions;
}

inline double spiral_radius(const SpiralConfig& cfg, int branch, double angle) {
  return cfg.inner_radius + cfg.ring_spacing * (branch + angle / kTwoPi);
}

struct SpiralBranch {
  int index = 0;
  std::string label;
  Date first;  // first date on the branch
  Date last;   // last date on the branch
  double inner_radius = 0;
  double outer_radius = 0;
};

struct SpiralNode {
  std::string event_key;
  std::string client_id;
  std::string employee_id;
  std::string action;
  Timestamp timestamp;
  int branch = 0;
  int day_index = 1;
  double angle = 0;
  double radius = 0;
  std::string color;
  std::string shape;  // source system
};

enum class RegionKind { billing_window, due_window, radial_cluster };

inline std::string_view to_string(RegionKind k) {
  switch (k) {
    case RegionKind::billing_window: return "billing_window";
    case RegionKind::due_window: return "due_window";
    case RegionKind::radial_cluster: return "radial_cluster";
  }
  return "?";
}

struct DayRange {
  int first = 1;
  int last = 1;
  bool operator==(const DayRange&) const = default;
};

/// Angular sector repeated on every branch. Sweeps counter-clockwise from
/// start_angle to end_angle; end < start means it wraps through angle 0.
struct SectorRegion {
  RegionKind kind = RegionKind::radial_cluster;
  std::vector<DayRange> days;
  double start_angle = 0;
  double end_angle = 0;
};

struct SpiralLayout {
  SpiralConfig config;
  TimeWindow window;
  std::vector<SpiralBranch> branches;
  std::vector<SpiralNode> nodes;
  std::vector<SectorRegion> regions;
  std::vector<double> ticks;   // one radial line per day division
  std::size_t excluded = 0;    // events outside the window
  std::size_t collapsed = 0;   // same pair, same date repeats dropped
};

namespace detail {

inline std::chrono::year_month month_of(Date d) {
  std::chrono::year_month_day ymd{d};
  return {ymd.year(), ymd.month()};
}

inline int months_between(std::chrono::year_month a, std::chrono::year_month b) {
  return static_cast<int>((b - a).count());
}

inline std::string month_label(std::chrono::year_month ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()), static_cast<unsigned>(ym.month()));
  return buf;
}

inline Date month_first(std::chrono::year_month ym) { return Date{ym / std::chrono::day{1}}; }
inline Date month_last(std::chrono::year_month ym) { return Date{ym / std::chrono::last}; }

}  // namespace detail

/// Places events on an Archimedean spiral, one turn per period.
///
/// Offline: the innermost turn is the first month (or period) of the window
/// and time runs outward. Semi-online: the innermost turn holds only the
/// window's last day ("today"); the next turn is the rest of the current
/// month and older months follow outward. Same-pair same-date repeats are
/// collapsed before placement.
inline SpiralLayout spiral_layout(std::span<const Event> events, const TimeWindow& window, const SpiralConfig& cfg = {}) {
  if (cfg.period_days < 1) throw Error(ErrorCode::argument, "period must be at least one day");
  if (cfg.ring_spacing <= 0) throw Error(ErrorCode::argument, "ring spacing must be positive");
  SpiralLayout out;
  out.config = cfg;
  out.window = window;
  const int divisions = cfg.divisions();
  for (int i = 0; i < divisions; ++i) out.ticks.push_back(kTwoPi * i / divisions);

  const Date first_day = date_of(window.begin);
  const Date today = date_of(window.end);
  const auto first_month = detail::month_of(first_day);
  const auto this_month = detail::month_of(today);

  // Branch table.
  auto add_branch = [&](int index, std::string label, Date first, Date last) {
    out.branches.push_back({index, std::move(label), first, last, spiral_radius(cfg, index, 0),
                            spiral_radius(cfg, index + 1, 0)});
  };
  if (cfg.mode == SpiralMode::offline) {
    if (cfg.month_view()) {
      int n = detail::months_between(first_month, this_month);
      for (int i = 0; i <= n; ++i) {
        auto ym = first_month + std::chrono::months{i};
        add_branch(i, detail::month_label(ym), std::max(first_day, detail::month_first(ym)),
                   std::min(today, detail::month_last(ym)));
      }
    } else {
      int n = static_cast<int>((today - first_day).count()) / cfg.period_days;
      for (int i = 0; i <= n; ++i) {
        Date a = first_day + std::chrono::days{i * cfg.period_days};
        Date b = std::min(today, a + std::chrono::days{cfg.period_days - 1});
        add_branch(i, format_date(a) + ".." + format_date(b), a, b);
      }
    }
  } else {
    add_branch(0, "today " + format_date(today), today, today);
    if (cfg.month_view()) {
      int n = detail::months_between(first_month, this_month);
      for (int i = 0; i <= n; ++i) {
        auto ym = this_month - std::chrono::months{i};
        Date a = std::max(first_day, detail::month_first(ym));
        Date b = i == 0 ? today - std::chrono::days{1} : detail::month_last(ym);
        add_branch(i + 1, detail::month_label(ym), a, b);
      }
    } else {
      int n = static_cast<int>((today - first_day).count() + cfg.period_days - 1) / cfg.period_days;
      for (int i = 0; i < n; ++i) {
        Date b = today - std::chrono::days{1 + i * cfg.period_days};
        Date a = std::max(first_day, b - std::chrono::days{cfg.period_days - 1});
        add_branch(i + 1, format_date(a) + ".." + format_date(b), a, b);
      }
    }
  }

  auto unique = dedupe_daily(events);
  out.collapsed = events.size() - unique.size();
  std::sort(unique.begin(), unique.end(), series_less);

  for (const Event& e : unique) {
    if (!window.contains(e.timestamp)) {
      ++out.excluded;
      continue;
    }
    Date d = date_of(e.timestamp);
    int branch = 0, day_index = 1;
    if (cfg.month_view()) {
      day_index = static_cast<int>(day_of_month(d));
      int m = detail::months_between(first_month, detail::month_of(d));
      if (cfg.mode == SpiralMode::offline) branch = m;
      else branch = d == today ? 0 : detail::months_between(detail::month_of(d), this_month) + 1;
    } else {
      int offset = static_cast<int>((d - first_day).count());
      day_index = offset % cfg.period_days + 1;
      if (cfg.mode == SpiralMode::offline) branch = offset / cfg.period_days;
      else branch = d == today ? 0 : static_cast<int>((today - d).count() - 1) / cfg.period_days + 1;
    }
    double angle = day_angle(day_index, divisions);
    out.nodes.push_back({event_key(e), e.client_id, e.employee_id, e.action, e.timestamp, branch, day_index, angle,
                         spiral_radius(cfg, branch, angle),
                         color_key(cfg.color_by_employee ? e.employee_id : e.client_id), e.source_system});
  }
  return out;
}

namespace detail {

inline SectorRegion make_sector(RegionKind kind, std::vector<DayRange> days, int divisions) {
  SectorRegion r{kind, std::move(days), 0, 0};
  r.start_angle = day_angle(r.days.front().first, divisions);
  // A sector ending on the last division closes the turn exactly.
  const int last = r.days.back().last;
  r.end_angle = last >= divisions ? kTwoPi : day_angle(last, divisions) + kTwoPi / divisions;
  return r;
}

}  // namespace detail

/// Sectors where activity recurs on nearby days from one calendar month to
/// the next: every pair of events in adjacent months whose days-of-month
/// differ by less than `delta_days` spans a sector; overlapping sectors are
/// merged. Pairs may involve different employees of the same client. Only
/// meaningful in the month views; other views get no regions.
inline std::vector<SectorRegion> radial_cluster_regions(const EventSeries& series, int delta_days = 3,
                                                        const SpiralConfig& cfg = {}) {
  std::vector<SectorRegion> out;
  if (!cfg.month_view() || delta_days < 1) return out;
  std::map<int, std::set<int>> days_by_month;  // months since year 0 -> days
  for (const auto& e : series.events) {
    std::chrono::year_month_day ymd{date_of(e.timestamp)};
    int m = static_cast<int>(ymd.year()) * 12 + static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
    days_by_month[m].insert(static_cast<int>(static_cast<unsigned>(ymd.day())));
  }
  std::vector<DayRange> ranges;
  for (const auto& [m, days] : days_by_month) {
    auto next = days_by_month.find(m + 1);
    if (next == days_by_month.end()) continue;
    for (int a : days)
      for (int b : next->second)
        if (std::abs(a - b) < delta_days) ranges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(ranges.begin(), ranges.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first, x.last) < std::tie(y.first, y.last);
  });
  std::vector<DayRange> merged;
  for (const auto& r : ranges) {
    if (!merged.empty() && r.first <= merged.back().last) merged.back().last = std::max(merged.back().last, r.last);
    else merged.push_back(r);
  }
  for (const auto& r : merged) out.push_back(detail::make_sector(RegionKind::radial_cluster, {r}, cfg.divisions()));
  return out;
}

/// The week leading up to the scheduled day: days (day - 7) .. day. When
/// that reaches before day 1 it wraps onto the previous month's tail.
inline std::optional<SectorRegion> billing_window_region(const ClientProfile& profile,
                                                         ScheduleTarget target = ScheduleTarget::billing,
                                                         const SpiralConfig& cfg = {}) {
  const auto& day = target == ScheduleTarget::billing ? profile.billing_day : profile.due_day;
  if (!day || !cfg.month_view()) return std::nullopt;
  const RegionKind kind = target == ScheduleTarget::billing ? RegionKind::billing_window : RegionKind::due_window;
  const int d = static_cast<int>(*day);
  const int start = d - 7;
  if (start >= 1) return detail::make_sector(kind, {{start, d}}, cfg.divisions());
  return detail::make_sector(kind, {{start + cfg.divisions(), 31}, {1, d}}, cfg.divisions());
}

}  // namespace fraudscope::render
