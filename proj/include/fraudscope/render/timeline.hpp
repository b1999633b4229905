#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/event.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace fraudscope::render {

struct TimelineNode {
  std::string event_key;
  std::string employee_id;
  std::string action;
  Timestamp timestamp;
  TimeOfDay band = TimeOfDay::in_shift;
  double x = 0;
  double y = 0;
};

/// All events of one date. Several events on a date are drawn inside one
/// box; rest days (weekend or holiday) are drawn entirely red.
struct TimelineDay {
  Date date;
  bool rest_day = false;
  bool boxed = false;
  double x = 0;
  std::vector<TimelineNode> nodes;
};

struct TimelineEdge {
  std::string from;  // event keys
  std::string to;
};

/// Intra-day view of a client's series. Bands, top to bottom: in shift,
/// end of shift, outside hours. Events are never deduplicated here.
struct TimelineLayout {
  std::string client_id;
  std::vector<TimelineDay> days;
  std::vector<TimelineEdge> edges;
  double day_spacing = 40;
  double band_height = 40;
};

inline int band_index(TimeOfDay t) {
  switch (t) {
    case TimeOfDay::in_shift: return 0;
    case TimeOfDay::end_of_shift: return 1;
    case TimeOfDay::outside_hours: return 2;
  }
  return 0;
}

inline TimelineLayout timeline_layout(const EventSeries& series, const CalendarConfig& calendar,
                                      int end_of_shift_minutes = kDefaultEndOfShiftMinutes) {
  TimelineLayout out;
  out.client_id = series.client_id;
  std::vector<const Event*> ordered;
  for (const auto& e : series.events) ordered.push_back(&e);
  std::sort(ordered.begin(), ordered.end(), [](const Event* a, const Event* b) { return series_less(*a, *b); });

  for (const Event* e : ordered) {
    Date d = date_of(e->timestamp);
    if (out.days.empty() || out.days.back().date != d) {
      TimelineDay day;
      day.date = d;
      day.rest_day = calendar.holidays.is_rest_day(d);
      day.x = static_cast<double>(out.days.size()) * out.day_spacing;
      out.days.push_back(std::move(day));
    }
    auto band = classify_time_of_day(*e, calendar.shift(e->employee_id), calendar.holidays, end_of_shift_minutes);
    double y = out.band_height * (band_index(band) + minute_of_day(e->timestamp) / 1440.0);
    auto& day = out.days.back();
    day.nodes.push_back({event_key(*e), e->employee_id, e->action, e->timestamp, band, day.x, y});
    day.boxed = day.nodes.size() > 1;
  }
  const TimelineNode* prev = nullptr;
  for (const auto& day : out.days)
    for (const auto& n : day.nodes) {
      if (prev) out.edges.push_back({prev->event_key, n.event_key});
      prev = &n;
    }
  return out;
}

}  // namespace fraudscope::render
