#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"

#include <nlohmann/json.hpp>

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fraudscope {

enum class LogFormat { csv, json_lines };

inline LogFormat parse_log_format(std::string_view tag) {
  if (tag == "csv") return LogFormat::csv;
  if (tag == "json-lines" || tag == "jsonl" || tag == "ndjson") return LogFormat::json_lines;
  throw Error(ErrorCode::config, "unknown log format", std::string(tag));
}

inline std::string_view to_string(LogFormat f) { return f == LogFormat::csv ? "csv" : "json-lines"; }

/// Maps input column (CSV) or field (JSON-lines) names onto event fields.
/// `source_system` is optional in the input; when absent every event gets
/// `default_source`.
struct SchemaMap {
  std::string timestamp = "timestamp";
  std::string employee = "employee_id";
  std::string client = "client_id";
  std::string action = "action";
  std::string source_system = "source_system";
  std::string default_source = kDefaultSourceSystem;
  char delimiter = ',';

  void validate() const {
    for (const auto* name : {&timestamp, &employee, &client, &action})
      if (name->empty()) throw Error(ErrorCode::config, "schema map must name timestamp, employee, client and action");
  }
};

inline SchemaMap schema_map_from_json(const nlohmann::json& j) {
  SchemaMap m;
  m.timestamp = j.value("timestamp", m.timestamp);
  m.employee = j.value("employee", j.value("employee_id", m.employee));
  m.client = j.value("client", j.value("client_id", m.client));
  m.action = j.value("action", m.action);
  m.source_system = j.value("source_system", m.source_system);
  m.default_source = j.value("default_source", m.default_source);
  if (j.contains("delimiter")) {
    auto d = j.at("delimiter").get<std::string>();
    if (d.size() != 1) throw Error(ErrorCode::config, "delimiter must be a single character", d);
    m.delimiter = d[0];
  }
  m.validate();
  return m;
}

struct Rejection {
  std::size_t line = 0;
  std::string reason;
  bool operator==(const Rejection&) const = default;
};

/// Invariant: accepted + rejected == records seen. `duplicates` counts the
/// accepted records that were already present in the store.
struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  std::vector<Rejection> rejection_reasons;
  std::optional<std::pair<Timestamp, Timestamp>> time_range;

  void extend_range(Timestamp t) {
    if (!time_range) time_range.emplace(t, t);
    else {
      time_range->first = std::min(time_range->first, t);
      time_range->second = std::max(time_range->second, t);
    }
  }
};

inline nlohmann::json to_json(const IngestReport& r) {
  nlohmann::json j{{"accepted", r.accepted}, {"rejected", r.rejected}, {"duplicates", r.duplicates}};
  auto& reasons = j["rejection_reasons"] = nlohmann::json::array();
  for (const auto& rej : r.rejection_reasons) reasons.push_back({{"line", rej.line}, {"reason", rej.reason}});
  if (r.time_range)
    j["time_range"] = {format_timestamp(r.time_range->first), format_timestamp(r.time_range->second)};
  else
    j["time_range"] = nullptr;
  return j;
}

struct ParseResult {
  std::vector<Event> events;
  IngestReport report;
};

namespace csv {

/// Splits one CSV record. Supports RFC 4180 quoting within a single line.
/// Returns nullopt on an unterminated quote.
inline std::optional<std::vector<std::string>> split(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
      field_started_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string quote(std::string_view field, char delim) {
  bool needs = field.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string_view::npos ||
               (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace csv

namespace detail {

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline bool blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

/// Validates the four mandatory fields and builds the event, or returns the
/// rejection reason.
inline std::variant<Event, std::string> make_event(std::string_view ts, std::string employee, std::string client,
                                                   std::string action, std::string source) {
  auto t = parse_timestamp(ts);
  if (!t) return "unparseable timestamp '" + std::string(ts) + "'";
  if (employee.empty()) return std::string("empty employee id");
  if (client.empty()) return std::string("empty client id");
  if (action.empty()) return std::string("empty action");
  return Event{*t, std::move(employee), std::move(client), std::move(action), std::move(source)};
}

}  // namespace detail

/// Parses an audit log. Every non-blank line after the CSV header is a
/// record; malformed records are reported with their 1-based line number.
inline ParseResult parse_log(std::istream& in, LogFormat format, const SchemaMap& schema) {
  schema.validate();
  if (!in.good() && !in.eof()) throw Error(ErrorCode::ingest, "input stream is not readable");

  ParseResult result;
  auto accept = [&](Event e) {
    result.report.extend_range(e.timestamp);
    ++result.report.accepted;
    result.events.push_back(std::move(e));
  };
  auto reject = [&](std::size_t line, std::string reason) {
    ++result.report.rejected;
    result.report.rejection_reasons.push_back({line, std::move(reason)});
  };

  std::string line;
  std::size_t line_no = 0;

  if (format == LogFormat::csv) {
    std::optional<std::vector<std::string>> header;
    int col_ts = -1, col_emp = -1, col_cli = -1, col_act = -1, col_src = -1;
    while (std::getline(in, line)) {
      ++line_no;
      detail::strip_cr(line);
      if (detail::blank(line)) continue;
      if (!header) {
        header = csv::split(line, schema.delimiter);
        if (!header) throw Error(ErrorCode::config, "malformed CSV header", "line " + std::to_string(line_no));
        auto find = [&](const std::string& name) {
          for (std::size_t i = 0; i < header->size(); ++i)
            if ((*header)[i] == name) return static_cast<int>(i);
          return -1;
        };
        col_ts = find(schema.timestamp);
        col_emp = find(schema.employee);
        col_cli = find(schema.client);
        col_act = find(schema.action);
        col_src = schema.source_system.empty() ? -1 : find(schema.source_system);
        if (col_ts < 0 || col_emp < 0 || col_cli < 0 || col_act < 0)
          throw Error(ErrorCode::config, "CSV header lacks a mapped column", line);
        continue;
      }
      auto fields = csv::split(line, schema.delimiter);
      if (!fields) {
        reject(line_no, "unterminated quote");
        continue;
      }
      if (fields->size() != header->size()) {
        reject(line_no, "expected " + std::to_string(header->size()) + " fields, got " +
                            std::to_string(fields->size()));
        continue;
      }
      auto& f = *fields;
      std::string source = col_src >= 0 && !f[col_src].empty() ? f[col_src] : schema.default_source;
      auto made = detail::make_event(f[col_ts], f[col_emp], f[col_cli], f[col_act], std::move(source));
      if (auto* e = std::get_if<Event>(&made)) accept(std::move(*e));
      else reject(line_no, std::get<std::string>(made));
    }
  } else {
    while (std::getline(in, line)) {
      ++line_no;
      detail::strip_cr(line);
      if (detail::blank(line)) continue;
      auto obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object()) {
        reject(line_no, "not a JSON object");
        continue;
      }
      auto str = [&](const std::string& key) -> std::optional<std::string> {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) return std::nullopt;
        return it->get<std::string>();
      };
      auto ts = str(schema.timestamp);
      auto emp = str(schema.employee);
      auto cli = str(schema.client);
      auto act = str(schema.action);
      if (!ts || !emp || !cli || !act) {
        reject(line_no, "missing or non-string mandatory field");
        continue;
      }
      std::string source = schema.default_source;
      if (!schema.source_system.empty())
        if (auto s = str(schema.source_system); s && !s->empty()) source = *s;
      auto made = detail::make_event(*ts, std::move(*emp), std::move(*cli), std::move(*act), std::move(source));
      if (auto* e = std::get_if<Event>(&made)) accept(std::move(*e));
      else reject(line_no, std::get<std::string>(made));
    }
  }
  if (in.bad()) throw Error(ErrorCode::ingest, "read error on input stream");
  return result;
}

inline nlohmann::json event_to_json(const Event& e) {
  return {{"key", event_key(e)},
          {"timestamp", format_timestamp(e.timestamp)},
          {"employee_id", e.employee_id},
          {"client_id", e.client_id},
          {"action", e.action},
          {"source_system", e.source_system}};
}

/// Strict inverse of event_to_json (the "key" member is ignored).
inline Event event_from_json(const nlohmann::json& j) {
  auto made = detail::make_event(j.at("timestamp").get<std::string>(), j.at("employee_id").get<std::string>(),
                                 j.at("client_id").get<std::string>(), j.at("action").get<std::string>(),
                                 j.value("source_system", std::string(kDefaultSourceSystem)));
  if (auto* e = std::get_if<Event>(&made)) return std::move(*e);
  throw Error(ErrorCode::argument, "invalid event", std::get<std::string>(made));
}

}  // namespace fraudscope
