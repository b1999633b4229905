#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/ranking.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fraudscope::render {

/// Keep clients whose score on `factor` reaches `min_severity`.
struct FactorPredicate {
  FactorId factor = FactorId::billing_distance;
  Severity min_severity = Severity::high;
};

/// Conjunction of optional predicates. An empty set keeps everything.
struct FilterSet {
  std::optional<std::set<TimeOfDay>> time_classes;
  std::optional<FactorPredicate> factor;
  std::optional<std::size_t> min_client_events;  // counted over the unfiltered input
  std::optional<std::set<std::string>> actions;
  std::optional<std::set<std::string>> employees;
  std::optional<std::set<std::string>> clients;
  std::optional<TimeWindow> window;

  bool empty() const {
    return !time_classes && !factor && !min_client_events && !actions && !employees && !clients && !window;
  }
};

/// Default rule of the unfiltered overview: hide clients with a single event.
inline FilterSet unfiltered_view_filter() {
  FilterSet f;
  f.min_client_events = 2;
  return f;
}

struct FilterContext {
  const CalendarConfig* calendar = nullptr;
  int end_of_shift_minutes = kDefaultEndOfShiftMinutes;
  std::span<const ClientRanking> rankings;
};

inline std::vector<Event> apply_filters(std::span<const Event> events, const FilterSet& filters,
                                        const FilterContext& ctx = {}) {
  if (filters.empty()) return {events.begin(), events.end()};

  std::map<std::string, std::size_t> per_client;
  if (filters.min_client_events)
    for (const auto& e : events) ++per_client[e.client_id];

  std::set<std::string> factor_clients;
  if (filters.factor) {
    if (ctx.rankings.empty() && !events.empty())
      throw Error(ErrorCode::argument, "factor filter needs client rankings");
    for (const auto& r : ctx.rankings)
      for (const auto& s : r.factor_scores)
        if (s.factor == filters.factor->factor && !s.skipped && s.severity >= filters.factor->min_severity)
          factor_clients.insert(r.client_id);
  }

  static const CalendarConfig kEmptyCalendar{};
  const CalendarConfig& cal = ctx.calendar ? *ctx.calendar : kEmptyCalendar;

  std::vector<Event> out;
  for (const auto& e : events) {
    if (filters.window && !filters.window->contains(e.timestamp)) continue;
    if (filters.actions && !filters.actions->contains(e.action)) continue;
    if (filters.employees && !filters.employees->contains(e.employee_id)) continue;
    if (filters.clients && !filters.clients->contains(e.client_id)) continue;
    if (filters.min_client_events && per_client[e.client_id] < *filters.min_client_events) continue;
    if (filters.factor && !factor_clients.contains(e.client_id)) continue;
    if (filters.time_classes &&
        !filters.time_classes->contains(
            classify_time_of_day(e, cal.shift(e.employee_id), cal.holidays, ctx.end_of_shift_minutes)))
      continue;
    out.push_back(e);
  }
  return out;
}

}  // namespace fraudscope::render
