#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/time.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace fraudscope {

enum class ClientStatus { cleared, suspect, blacklisted };

inline std::string_view to_string(ClientStatus s) {
  switch (s) {
    case ClientStatus::cleared: return "cleared";
    case ClientStatus::suspect: return "suspect";
    case ClientStatus::blacklisted: return "blacklisted";
  }
  return "cleared";
}

inline ClientStatus parse_client_status(std::string_view s) {
  if (s == "cleared") return ClientStatus::cleared;
  if (s == "suspect") return ClientStatus::suspect;
  if (s == "blacklisted") return ClientStatus::blacklisted;
  throw Error(ErrorCode::argument, "unknown client status", std::string(s));
}

struct ClientProfile {
  std::string client_id;
  std::optional<unsigned> billing_day;  // 1..31
  std::optional<unsigned> due_day;      // 1..31
  ClientStatus status = ClientStatus::cleared;

  bool operator==(const ClientProfile&) const = default;
};

enum class ScheduleTarget { billing, due };

/// Working interval within one day, minutes after midnight, start < end.
struct ShiftInterval {
  int start = 0;
  int end = 0;
  bool operator==(const ShiftInterval&) const = default;
};

/// Per-weekday shifts indexed by weekday c_encoding (0 = Sunday). An empty
/// slot means the employee is off that day.
struct ShiftSchedule {
  std::string employee_id;
  std::array<std::optional<ShiftInterval>, 7> days;

  static ShiftSchedule weekdays(std::string employee, ShiftInterval hours) {
    ShiftSchedule s{std::move(employee), {}};
    for (unsigned d = 1; d <= 5; ++d) s.days[d] = hours;
    return s;
  }
};

struct HolidayCalendar {
  std::set<Date> holidays;
  std::set<unsigned> weekend{0, 6};  // c_encoding

  bool is_rest_day(Date d) const {
    return holidays.contains(d) || weekend.contains(std::chrono::weekday{d}.c_encoding());
  }
};

enum class TimeOfDay { in_shift, end_of_shift, outside_hours };

inline std::string_view to_string(TimeOfDay t) {
  switch (t) {
    case TimeOfDay::in_shift: return "in_shift";
    case TimeOfDay::end_of_shift: return "end_of_shift";
    case TimeOfDay::outside_hours: return "outside_hours";
  }
  return "in_shift";
}

inline TimeOfDay parse_time_of_day(std::string_view s) {
  if (s == "in_shift") return TimeOfDay::in_shift;
  if (s == "end_of_shift") return TimeOfDay::end_of_shift;
  if (s == "outside_hours") return TimeOfDay::outside_hours;
  throw Error(ErrorCode::argument, "unknown time-of-day class", std::string(s));
}

/// Scheduled day of `ym`, clamped to the month's last day.
inline Date scheduled_date(std::chrono::year_month ym, unsigned day) {
  unsigned d = std::min(day, days_in_month(ym));
  return Date{ym / std::chrono::day{d}};
}

/// Whole days from the event date to the next occurrence of the scheduled
/// day-of-month. An event on the scheduled date itself gives 0.
inline int distance_to_scheduled_day(Timestamp event_time, unsigned day) {
  if (day < 1 || day > 31) throw Error(ErrorCode::argument, "scheduled day out of range", std::to_string(day));
  Date date = date_of(event_time);
  std::chrono::year_month_day ymd{date};
  std::chrono::year_month ym{ymd.year(), ymd.month()};
  Date candidate = scheduled_date(ym, day);
  if (candidate < date) candidate = scheduled_date(ym + std::chrono::months{1}, day);
  return static_cast<int>((candidate - date).count());
}

inline int distance_to_billing(Timestamp event_time, const ClientProfile& profile,
                               ScheduleTarget target = ScheduleTarget::billing) {
  const auto& day = target == ScheduleTarget::billing ? profile.billing_day : profile.due_day;
  if (!day)
    throw Error(ErrorCode::argument, target == ScheduleTarget::billing ? "profile has no billing day" : "profile has no due day",
                profile.client_id);
  return distance_to_scheduled_day(event_time, *day);
}

inline constexpr int kDefaultEndOfShiftMinutes = 120;

/// Rest days are always outside hours. Without a schedule the event counts
/// as in-shift so that ranking still proceeds on missing shift data.
inline TimeOfDay classify_time_of_day(Timestamp t, const ShiftSchedule* shifts, const HolidayCalendar& calendar,
                                      int end_of_shift_minutes = kDefaultEndOfShiftMinutes) {
  Date d = date_of(t);
  if (calendar.is_rest_day(d)) return TimeOfDay::outside_hours;
  if (!shifts) return TimeOfDay::in_shift;
  const auto& slot = shifts->days[std::chrono::weekday{d}.c_encoding()];
  if (!slot) return TimeOfDay::outside_hours;
  int m = minute_of_day(t);
  if (m < slot->start || m >= slot->end) return TimeOfDay::outside_hours;
  if (m >= std::max(slot->start, slot->end - end_of_shift_minutes)) return TimeOfDay::end_of_shift;
  return TimeOfDay::in_shift;
}

inline TimeOfDay classify_time_of_day(const Event& e, const ShiftSchedule* shifts, const HolidayCalendar& calendar,
                                      int end_of_shift_minutes = kDefaultEndOfShiftMinutes) {
  return classify_time_of_day(e.timestamp, shifts, calendar, end_of_shift_minutes);
}

/// Client profiles, shifts and holidays of one data set.
struct CalendarConfig {
  std::map<std::string, ClientProfile> profiles;
  std::map<std::string, ShiftSchedule> shifts;
  HolidayCalendar holidays;

  const ClientProfile* profile(std::string_view client) const {
    auto it = profiles.find(std::string(client));
    return it == profiles.end() ? nullptr : &it->second;
  }
  const ShiftSchedule* shift(std::string_view employee) const {
    auto it = shifts.find(std::string(employee));
    return it == shifts.end() ? nullptr : &it->second;
  }
  /// Profile for the client, or a default (cleared, no schedule) one.
  ClientProfile profile_or_default(std::string_view client) const {
    if (const auto* p = profile(client)) return *p;
    return ClientProfile{std::string(client), std::nullopt, std::nullopt, ClientStatus::cleared};
  }
};

namespace detail {

inline constexpr std::array<const char*, 7> kWeekdayNames{"sun", "mon", "tue", "wed", "thu", "fri", "sat"};

inline unsigned parse_weekday(std::string_view s) {
  for (unsigned i = 0; i < 7; ++i)
    if (s == kWeekdayNames[i]) return i;
  throw Error(ErrorCode::config, "unknown weekday", std::string(s));
}

inline int parse_clock(const std::string& s) {
  int h, m;
  if (s.size() != 5 || s[2] != ':' || !read_int(s, 0, 2, h) || !read_int(s, 3, 2, m) || m > 59 || h > 24 ||
      (h == 24 && m != 0))
    throw Error(ErrorCode::config, "bad clock time (want HH:MM)", s);
  return h * 60 + m;
}

inline std::string format_clock(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

inline ShiftInterval parse_interval(const nlohmann::json& j, const std::string& who) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::config, "shift must be [\"HH:MM\",\"HH:MM\"] or \"off\"", who);
  ShiftInterval iv{parse_clock(j[0].get<std::string>()), parse_clock(j[1].get<std::string>())};
  if (iv.end <= iv.start) throw Error(ErrorCode::config, "overnight or empty shifts are not supported", who);
  return iv;
}

inline std::optional<unsigned> parse_day_of_month(const nlohmann::json& j, const char* key, const std::string& who) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  int d = j.at(key).get<int>();
  if (d < 1 || d > 31) throw Error(ErrorCode::config, std::string(key) + " must be in 1..31", who);
  return static_cast<unsigned>(d);
}

}  // namespace detail

/// Loads the calendar document:
///
///     {"clients":  [{"id": "c1", "billing_day": 15, "due_day": 25, "status": "cleared"}],
///      "shifts":   [{"employee": "u1", "hours": ["09:00", "17:00"]},
///                   {"employee": "u2", "week": {"mon": ["08:00", "16:00"], "sat": "off"}}],
///      "holidays": ["2014-03-25"],
///      "weekend":  ["sat", "sun"]}
///
/// `hours` applies Monday to Friday; `week` entries override per day.
inline CalendarConfig calendar_from_json(const nlohmann::json& j) {
  CalendarConfig cfg;
  try {
    for (const auto& c : j.value("clients", nlohmann::json::array())) {
      ClientProfile p;
      p.client_id = c.at("id").get<std::string>();
      if (p.client_id.empty()) throw Error(ErrorCode::config, "client id must be non-empty");
      p.billing_day = detail::parse_day_of_month(c, "billing_day", p.client_id);
      p.due_day = detail::parse_day_of_month(c, "due_day", p.client_id);
      if (c.contains("status")) {
        try {
          p.status = parse_client_status(c.at("status").get<std::string>());
        } catch (const Error& e) {
          throw Error(ErrorCode::config, e.what(), e.detail());
        }
      }
      cfg.profiles[p.client_id] = p;
    }
    for (const auto& s : j.value("shifts", nlohmann::json::array())) {
      ShiftSchedule sched;
      sched.employee_id = s.at("employee").get<std::string>();
      if (s.contains("hours")) sched = ShiftSchedule::weekdays(sched.employee_id, detail::parse_interval(s.at("hours"), sched.employee_id));
      if (s.contains("week")) {
        for (const auto& [day, spec] : s.at("week").items()) {
          unsigned wd = detail::parse_weekday(day);
          if (spec.is_string() && spec.get<std::string>() == "off") sched.days[wd].reset();
          else sched.days[wd] = detail::parse_interval(spec, sched.employee_id);
        }
      }
      cfg.shifts[sched.employee_id] = sched;
    }
    for (const auto& h : j.value("holidays", nlohmann::json::array())) {
      auto d = parse_date(h.get<std::string>());
      if (!d) throw Error(ErrorCode::config, "bad holiday date", h.get<std::string>());
      cfg.holidays.holidays.insert(*d);
    }
    if (j.contains("weekend")) {
      cfg.holidays.weekend.clear();
      for (const auto& w : j.at("weekend")) cfg.holidays.weekend.insert(detail::parse_weekday(w.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, "malformed calendar document", e.what());
  }
  return cfg;
}

inline nlohmann::json to_json(const CalendarConfig& cfg) {
  nlohmann::json clients = nlohmann::json::array();
  for (const auto& [id, p] : cfg.profiles) {
    nlohmann::json c{{"id", id}, {"status", to_string(p.status)}};
    if (p.billing_day) c["billing_day"] = *p.billing_day;
    if (p.due_day) c["due_day"] = *p.due_day;
    clients.push_back(std::move(c));
  }
  nlohmann::json shifts = nlohmann::json::array();
  for (const auto& [id, s] : cfg.shifts) {
    nlohmann::json week = nlohmann::json::object();
    for (unsigned d = 0; d < 7; ++d) {
      if (s.days[d]) week[detail::kWeekdayNames[d]] = {detail::format_clock(s.days[d]->start), detail::format_clock(s.days[d]->end)};
      else week[detail::kWeekdayNames[d]] = "off";
    }
    shifts.push_back({{"employee", id}, {"week", std::move(week)}});
  }
  nlohmann::json holidays = nlohmann::json::array();
  for (Date d : cfg.holidays.holidays) holidays.push_back(format_date(d));
  nlohmann::json weekend = nlohmann::json::array();
  for (unsigned w : cfg.holidays.weekend) weekend.push_back(detail::kWeekdayNames[w]);
  return {{"clients", clients}, {"shifts", shifts}, {"holidays", holidays}, {"weekend", weekend}};
}

}  // namespace fraudscope
