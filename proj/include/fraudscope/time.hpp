#pragma once

#include "fraudscope/error.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace fraudscope {

// All timestamps are civil times in the single timezone configured for a
// data set. sys_time is used purely as a calendar-arithmetic carrier; no
// zone conversion ever happens.
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;
using Date = std::chrono::sys_days;

inline Date date_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

inline int minute_of_day(Timestamp t) {
  return static_cast<int>((t - date_of(t)).count());
}

inline std::chrono::year_month_day ymd_of(Timestamp t) { return {date_of(t)}; }

inline unsigned day_of_month(Date d) { return static_cast<unsigned>(std::chrono::year_month_day{d}.day()); }

inline unsigned days_in_month(std::chrono::year_month ym) {
  return static_cast<unsigned>((ym / std::chrono::last).day());
}

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// Parses `YYYY-MM-DD`.
inline std::optional<Date> parse_date(std::string_view s) {
  int y, m, d;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!detail::read_int(s, 0, 4, y) || !detail::read_int(s, 5, 2, m) || !detail::read_int(s, 8, 2, d))
    return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

/// Parses `YYYY-MM-DDTHH:MM` with optional `:SS`. A space is accepted in
/// place of `T`. Seconds are validated and then truncated to the minute.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  if (s.size() != 16 && s.size() != 19) return std::nullopt;
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  auto date = parse_date(s.substr(0, 10));
  if (!date) return std::nullopt;
  int hh, mm, ss = 0;
  if (s[13] != ':' || !detail::read_int(s, 11, 2, hh) || !detail::read_int(s, 14, 2, mm)) return std::nullopt;
  if (s.size() == 19 && (s[16] != ':' || !detail::read_int(s, 17, 2, ss))) return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return Timestamp{*date} + std::chrono::hours{hh} + std::chrono::minutes{mm};
}

inline std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

inline std::string format_timestamp(Timestamp t) {
  int mod = minute_of_day(t);
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d", mod / 60, mod % 60);
  return format_date(date_of(t)) + buf;
}

/// Closed interval [begin, end].
struct TimeWindow {
  Timestamp begin;
  Timestamp end;

  bool contains(Timestamp t) const { return begin <= t && t <= end; }
  bool operator==(const TimeWindow&) const = default;
};

inline TimeWindow make_window(Timestamp begin, Timestamp end) {
  if (end < begin)
    throw Error(ErrorCode::argument, "inverted time window",
                format_timestamp(begin) + " > " + format_timestamp(end));
  return {begin, end};
}

/// Parses "FROM,TO" where each side is a timestamp or a bare date. A bare
/// date on the right-hand side means the end of that day.
inline TimeWindow parse_window(std::string_view text) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw Error(ErrorCode::argument, "window must be FROM,TO", std::string(text));
  auto side = [&](std::string_view s, bool end_of_day) -> Timestamp {
    if (auto t = parse_timestamp(s)) return *t;
    if (auto d = parse_date(s)) {
      return end_of_day ? Timestamp{*d} + std::chrono::minutes{24 * 60 - 1} : Timestamp{*d};
    }
    throw Error(ErrorCode::argument, "bad window bound", std::string(s));
  };
  return make_window(side(text.substr(0, comma), false), side(text.substr(comma + 1), true));
}

inline std::string format_window(const TimeWindow& w) {
  return format_timestamp(w.begin) + "," + format_timestamp(w.end);
}

}  // namespace fraudscope
