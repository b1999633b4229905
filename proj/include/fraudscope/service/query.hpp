#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/time.hpp"

#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fraudscope::service {

// Query expressions are AND-combined field comparisons:
//
//   employee_id = u7 AND timestamp >= 2015-01-01 AND time_class != in_shift
//
// Fields: timestamp, date, employee_id, client_id, action, source_system,
// time_class (short names employee, client, source also accepted). Values
// are bare words or double-quoted strings with \" and \\ escapes. Ordering
// operators apply to timestamp and date only. An empty expression matches
// everything.

enum class QueryField { timestamp, date, employee, client, action, source, time_class };
enum class QueryOp { eq, ne, lt, le, gt, ge };

struct QueryClause {
  QueryField field = QueryField::employee;
  QueryOp op = QueryOp::eq;
  std::string value;
  std::optional<Timestamp> time;   // timestamp clauses
  std::optional<Date> date;        // date clauses
  std::optional<TimeOfDay> time_class;
};

struct Query {
  std::vector<QueryClause> clauses;
  bool empty() const { return clauses.empty(); }
};

namespace detail {

[[noreturn]] inline void query_error(const std::string& msg, std::size_t pos) {
  throw Error(ErrorCode::query, msg, "position " + std::to_string(pos));
}

inline std::optional<QueryField> field_named(std::string_view s) {
  if (s == "timestamp" || s == "time") return QueryField::timestamp;
  if (s == "date") return QueryField::date;
  if (s == "employee_id" || s == "employee") return QueryField::employee;
  if (s == "client_id" || s == "client") return QueryField::client;
  if (s == "action") return QueryField::action;
  if (s == "source_system" || s == "source") return QueryField::source;
  if (s == "time_class") return QueryField::time_class;
  return std::nullopt;
}

class QueryLexer {
 public:
  explicit QueryLexer(std::string_view text) : s_(text) {}

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  std::size_t pos() const { return pos_; }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::optional<QueryOp> op() {
    skip_space();
    auto rest = s_.substr(pos_);
    auto take = [&](std::size_t n, QueryOp o) {
      pos_ += n;
      return o;
    };
    if (rest.starts_with("!=")) return take(2, QueryOp::ne);
    if (rest.starts_with("<=")) return take(2, QueryOp::le);
    if (rest.starts_with(">=")) return take(2, QueryOp::ge);
    if (rest.starts_with("==")) return take(2, QueryOp::eq);
    if (rest.starts_with("=")) return take(1, QueryOp::eq);
    if (rest.starts_with("<")) return take(1, QueryOp::lt);
    if (rest.starts_with(">")) return take(1, QueryOp::gt);
    return std::nullopt;
  }

  std::string value() {
    skip_space();
    if (pos_ >= s_.size()) query_error("expected a value", pos_);
    if (s_[pos_] != '"') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '"') ++pos_;
      return std::string(s_.substr(start, pos_ - start));
    }
    std::size_t open = pos_++;
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        c = s_[pos_++];
        if (c != '"' && c != '\\') query_error("unknown escape", pos_ - 2);
      }
      out.push_back(c);
    }
    query_error("unterminated string", open);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

inline bool case_equal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

template <class T>
bool compare(const T& a, QueryOp op, const T& b) {
  switch (op) {
    case QueryOp::eq: return a == b;
    case QueryOp::ne: return a != b;
    case QueryOp::lt: return a < b;
    case QueryOp::le: return a <= b;
    case QueryOp::gt: return a > b;
    case QueryOp::ge: return a >= b;
  }
  return false;
}

}  // namespace detail

inline Query parse_query(std::string_view text) {
  Query q;
  detail::QueryLexer lex(text);
  if (lex.done()) return q;
  while (true) {
    std::size_t at = (lex.skip_space(), lex.pos());
    auto name = lex.word();
    if (name.empty()) detail::query_error("expected a field name", at);
    auto field = detail::field_named(name);
    if (!field) detail::query_error("unknown field '" + name + "'", at);
    std::size_t op_at = (lex.skip_space(), lex.pos());
    auto op = lex.op();
    if (!op) detail::query_error("expected a comparison operator", op_at);
    std::size_t value_at = (lex.skip_space(), lex.pos());
    QueryClause c{*field, *op, lex.value(), {}, {}, {}};
    const bool ordering = *op != QueryOp::eq && *op != QueryOp::ne;
    switch (*field) {
      case QueryField::timestamp:
        if (auto t = parse_timestamp(c.value)) c.time = t;
        else if (auto d = parse_date(c.value)) c.time = Timestamp{*d};
        else detail::query_error("bad timestamp '" + c.value + "'", value_at);
        break;
      case QueryField::date:
        c.date = parse_date(c.value);
        if (!c.date) detail::query_error("bad date '" + c.value + "'", value_at);
        break;
      case QueryField::time_class:
        try {
          c.time_class = parse_time_of_day(c.value);
        } catch (const Error&) {
          detail::query_error("unknown time class '" + c.value + "'", value_at);
        }
        [[fallthrough]];
      default:
        if (ordering) detail::query_error("ordering comparison on a non-time field", op_at);
    }
    q.clauses.push_back(std::move(c));
    if (lex.done()) break;
    std::size_t and_at = lex.pos();
    auto conj = lex.word();
    if (!detail::case_equal(conj, "and")) detail::query_error("expected AND", and_at);
    if (lex.done()) detail::query_error("expression ends after AND", lex.pos());
  }
  return q;
}

struct QueryContext {
  const CalendarConfig* calendar = nullptr;
  int end_of_shift_minutes = kDefaultEndOfShiftMinutes;
};

inline bool matches(const Query& q, const Event& e, const QueryContext& ctx = {}) {
  for (const auto& c : q.clauses) {
    bool ok = true;
    switch (c.field) {
      case QueryField::timestamp: ok = detail::compare(e.timestamp, c.op, *c.time); break;
      case QueryField::date: ok = detail::compare(date_of(e.timestamp), c.op, *c.date); break;
      case QueryField::employee: ok = detail::compare(e.employee_id, c.op, c.value); break;
      case QueryField::client: ok = detail::compare(e.client_id, c.op, c.value); break;
      case QueryField::action: ok = detail::compare(e.action, c.op, c.value); break;
      case QueryField::source: ok = detail::compare(e.source_system, c.op, c.value); break;
      case QueryField::time_class: {
        static const CalendarConfig kEmpty{};
        const CalendarConfig& cal = ctx.calendar ? *ctx.calendar : kEmpty;
        auto t = classify_time_of_day(e, cal.shift(e.employee_id), cal.holidays, ctx.end_of_shift_minutes);
        ok = detail::compare(t, c.op, *c.time_class);
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

struct QueryPage {
  std::vector<Event> events;
  std::size_t total = 0;   // matches across all pages
  std::size_t offset = 0;
  std::size_t limit = 0;
  std::optional<std::size_t> next_offset;
};

/// Matches in input order (the store keeps series order), one page of them.
inline QueryPage query_events(std::span<const Event> events, const Query& q, std::size_t offset = 0,
                              std::size_t limit = 1000, const QueryContext& ctx = {}) {
  if (limit == 0) throw Error(ErrorCode::argument, "page limit must be positive");
  QueryPage page;
  page.offset = offset;
  page.limit = limit;
  for (const auto& e : events) {
    if (!matches(q, e, ctx)) continue;
    if (page.total >= offset && page.events.size() < limit) page.events.push_back(e);
    ++page.total;
  }
  if (offset + page.events.size() < page.total) page.next_offset = offset + page.events.size();
  return page;
}

}  // namespace fraudscope::service
