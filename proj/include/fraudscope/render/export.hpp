#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/ingest.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>

namespace fraudscope::render {

/// Writes events in a format parse_log reads back unchanged (given the same
/// schema map). CSV always carries a header row.
inline std::size_t write_log(std::ostream& out, std::span<const Event> events, LogFormat format,
                             const SchemaMap& schema = {}) {
  const char d = schema.delimiter;
  const std::string& src_name = schema.source_system.empty() ? std::string("source_system") : schema.source_system;
  if (format == LogFormat::csv) {
    out << csv::quote(schema.timestamp, d) << d << csv::quote(schema.employee, d) << d << csv::quote(schema.client, d)
        << d << csv::quote(schema.action, d) << d << csv::quote(src_name, d) << '\n';
    for (const auto& e : events)
      out << format_timestamp(e.timestamp) << d << csv::quote(e.employee_id, d) << d << csv::quote(e.client_id, d)
          << d << csv::quote(e.action, d) << d << csv::quote(e.source_system, d) << '\n';
  } else {
    for (const auto& e : events) {
      nlohmann::json j{{schema.timestamp, format_timestamp(e.timestamp)},
                       {schema.employee, e.employee_id},
                       {schema.client, e.client_id},
                       {schema.action, e.action},
                       {src_name, e.source_system}};
      out << j.dump() << '\n';
    }
  }
  return events.size();
}

/// Exports to a file. On any failure the partial file is removed.
inline std::size_t export_log(std::span<const Event> events, const std::filesystem::path& destination,
                              LogFormat format, const SchemaMap& schema = {}) {
  auto tmp = destination;
  tmp += ".partial";
  std::size_t n = 0;
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::storage, "cannot open export destination", destination.string());
    n = write_log(out, events, format, schema);
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::storage, "write failed during export", destination.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, destination, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::storage, "cannot move export into place", destination.string());
  }
  return n;
}

}  // namespace fraudscope::render
