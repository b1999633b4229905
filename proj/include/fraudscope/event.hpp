#pragma once

#include "fraudscope/digest.hpp"
#include "fraudscope/time.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace fraudscope {

inline constexpr const char* kDefaultSourceSystem = "default";

/// One audit record: who (employee) did what (action) for whom (client),
/// when, and on which business system.
struct Event {
  Timestamp timestamp;
  std::string employee_id;
  std::string client_id;
  std::string action;
  std::string source_system = kDefaultSourceSystem;

  bool operator==(const Event&) const = default;
};

/// Series order: timestamp, then employee, then action. The remaining fields
/// only make the order total.
inline bool series_less(const Event& a, const Event& b) {
  return std::tie(a.timestamp, a.employee_id, a.action, a.client_id, a.source_system) <
         std::tie(b.timestamp, b.employee_id, b.action, b.client_id, b.source_system);
}

struct SeriesLess {
  bool operator()(const Event& a, const Event& b) const { return series_less(a, b); }
};

/// Stable identifier of an event, used as SVG element id and in API payloads.
inline std::string event_key(const Event& e) {
  std::string canon = format_timestamp(e.timestamp);
  for (const std::string* field : {&e.employee_id, &e.client_id, &e.action, &e.source_system}) {
    canon.push_back('\x1f');
    canon += *field;
  }
  return "ev-" + hex_digest(canon);
}

struct EventSeries {
  std::string client_id;
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  std::size_t size() const { return events.size(); }
  bool operator==(const EventSeries&) const = default;
};

/// Builds a series from arbitrary events of one client, sorting them.
inline EventSeries make_series(std::string client_id, std::vector<Event> events) {
  std::sort(events.begin(), events.end(), series_less);
  return {std::move(client_id), std::move(events)};
}

/// Collapses repeated events of the same (client, employee) pair on the same
/// calendar date to the earliest one. Input order is preserved for survivors.
inline std::vector<Event> dedupe_daily(std::span<const Event> events) {
  using Key = std::tuple<std::string, std::string, Date>;
  std::map<Key, std::size_t> first;
  for (std::size_t i = 0; i < events.size(); ++i) {
    Key key{events[i].client_id, events[i].employee_id, date_of(events[i].timestamp)};
    auto [it, inserted] = first.try_emplace(key, i);
    if (!inserted && series_less(events[i], events[it->second])) it->second = i;
  }
  std::vector<bool> keep(events.size(), false);
  for (const auto& [_, idx] : first) keep[idx] = true;
  std::vector<Event> out;
  out.reserve(first.size());
  for (std::size_t i = 0; i < events.size(); ++i)
    if (keep[i]) out.push_back(events[i]);
  return out;
}

/// Spiral input only; ranking factors always see the raw series.
inline EventSeries dedupe_daily(const EventSeries& series) {
  return {series.client_id, dedupe_daily(std::span<const Event>(series.events))};
}

}  // namespace fraudscope
