#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/ingest.hpp"
#include "fraudscope/render/export.hpp"
#include "fraudscope/render/json.hpp"
#include "fraudscope/render/layered.hpp"
#include "fraudscope/render/stacked_bar.hpp"
#include "fraudscope/service/query.hpp"
#include "fraudscope/service/session.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fraudscope::service {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::optional<std::string> param(const std::string& name) const {
    auto it = query.find(name);
    if (it == query.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::string> header(const std::string& name) const {
    auto it = headers.find(name);
    if (it == headers.end()) return std::nullopt;
    return it->second;
  }
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::storage:
    case ErrorCode::internal: return 500;
    case ErrorCode::ingest: return 422;
    default: return 400;
  }
}

inline Response error_response(int status, std::string_view code, const std::string& message,
                               const std::string& detail = {}) {
  nlohmann::json body{{"code", code}, {"message", message}, {"detail", detail}};
  return {status, "application/json", body.dump(), {}};
}

inline Response json_response(const nlohmann::json& j, int status = 200) {
  return {status, "application/json", j.dump(), {}};
}

namespace detail {

inline std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    auto j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    parts.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

inline std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error(ErrorCode::argument, std::string("bad ") + what, s);
  return v;
}

inline std::optional<TimeWindow> window_param(const Request& req) {
  auto w = req.param("window");
  if (!w || w->empty()) return std::nullopt;
  return parse_window(*w);
}

}  // namespace detail

/// Transport-independent request router. Every failure is answered with the
/// envelope {code, message, detail}.
class Api {
 public:
  explicit Api(Session& session, std::optional<std::string> token = std::nullopt)
      : session_(session), token_(std::move(token)) {}

  Response handle(const Request& req) const {
    try {
      if (token_) {
        auto auth = req.header("authorization");
        if (!auth || *auth != "Bearer " + *token_)
          return error_response(401, "unauthorized", "missing or wrong bearer token");
      }
      return route(req);
    } catch (const Error& e) {
      return error_response(http_status(e.code()), to_string(e.code()), e.what(), e.detail());
    } catch (const std::exception& e) {
      return error_response(500, "internal_error", "unexpected failure", e.what());
    }
  }

 private:
  Response route(const Request& req) const {
    auto p = detail::split_path(req.path);
    const auto& m = req.method;
    if (p.size() < 2 || p[0] != "api") return not_found(req);
    const auto n = p.size();

    if (p[1] == "rankings" && n == 3) {
      if (m != "GET") return bad_method(req);
      if (p[2] == "clients") return rankings_clients(req);
      if (p[2] == "employees") return rankings_employees(req);
    }
    if (p[1] == "clients" && n == 4) {
      if (p[3] == "series") return m == "GET" ? client_series(p[2]) : bad_method(req);
      if (p[3] == "layouts") return m == "GET" ? json_response(client_layouts(*session_.view(), p[2])) : bad_method(req);
      if (p[3] == "status") return m == "POST" ? client_status(req, p[2]) : bad_method(req);
    }
    if (p[1] == "layouts" && n == 3) {
      if (m != "GET") return bad_method(req);
      if (p[2] == "layered") return layered(req);
      if (p[2] == "stacked-bars") return stacked_bars(req);
    }
    if (p[1] == "frames") {
      if (m != "GET") return bad_method(req);
      auto v = session_.view();
      if (n == 2) return json_response(render::to_json(v->manifest));
      if (n == 3) {
        auto body = frame_svg(*v, detail::parse_count(p[2], "frame index"));
        return {200, "image/svg+xml", std::move(body), {}};
      }
    }
    if (p[1] == "config" && n == 3 && p[2] == "factors") {
      if (m == "GET") return json_response(to_json(session_.view()->config));
      if (m == "PUT") return put_config(req);
      return bad_method(req);
    }
    if (p[1] == "ingest" && n == 2) return m == "POST" ? ingest(req) : bad_method(req);
    if (p[1] == "export" && n == 2) return m == "GET" ? export_events(req) : bad_method(req);
    if (p[1] == "events" && n == 2) return m == "GET" ? events(req) : bad_method(req);
    if (p[1] == "audit" && n == 2) {
      if (m != "GET") return bad_method(req);
      nlohmann::json a = nlohmann::json::array();
      for (const auto& e : session_.audit_trail()) a.push_back(to_json(e));
      return json_response(a);
    }
    return not_found(req);
  }

  static Response not_found(const Request& req) {
    return error_response(404, "not_found", "no such endpoint", req.method + " " + req.path);
  }
  static Response bad_method(const Request& req) {
    return error_response(405, "method_not_allowed", "method not allowed", req.method + " " + req.path);
  }

  static std::string actor_of(const Request& req, const nlohmann::json& body = nullptr) {
    if (body.is_object() && body.contains("actor")) return body.at("actor").get<std::string>();
    return req.header("x-actor").value_or("auditor");
  }

  Response rankings_clients(const Request& req) const {
    auto result = session_.rank_window(detail::window_param(req));
    nlohmann::json clients = nlohmann::json::array();
    for (const auto& c : result.clients) clients.push_back(to_json(c));
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : result.weights) weights.push_back(to_json(w));
    return json_response({{"clients", clients}, {"weights", weights}, {"warnings", result.warnings},
                          {"digest", rankings_digest(result)}});
  }

  Response rankings_employees(const Request& req) const {
    auto result = session_.rank_window(detail::window_param(req));
    nlohmann::json employees = nlohmann::json::array();
    for (const auto& e : result.employees) employees.push_back(to_json(e));
    return json_response({{"employees", employees}});
  }

  Response client_series(const std::string& id) const {
    auto v = session_.view();
    if (!v->store->has_client(id)) throw Error(ErrorCode::not_found, "unknown client", id);
    auto series = series_for_client(*v->store, id, v->window);
    auto dedup = dedupe_daily(series);
    auto list = [](const std::vector<Event>& evs) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& e : evs) a.push_back(event_to_json(e));
      return a;
    };
    return json_response({{"client_id", id}, {"raw", list(series.events)}, {"dedup", list(dedup.events)}});
  }

  Response client_status(const Request& req, const std::string& id) const {
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("status") || !body.at("status").is_string())
      throw Error(ErrorCode::argument, "body must be {\"status\": \"cleared|suspect|blacklisted\"}");
    auto status = parse_client_status(body.at("status").get<std::string>());
    auto r = session_.set_client_status(id, status, actor_of(req, body));
    return json_response(to_json(r));
  }

  Response layered(const Request& req) const {
    auto v = session_.view();
    auto client = req.param("client");
    if (client && !v->store->has_client(*client)) throw Error(ErrorCode::not_found, "unknown client", *client);
    auto events = v->window ? v->store->by_time(*v->window)
                            : std::vector<Event>(v->store->events().begin(), v->store->events().end());
    return json_response(render::to_json(render::layered_layout(events, v->rankings.clients, client)));
  }

  Response stacked_bars(const Request& req) const {
    std::size_t k = 10;
    if (auto s = req.param("k")) k = detail::parse_count(*s, "k");
    return json_response(render::to_json(render::stacked_bar(session_.view()->rankings.clients, k)));
  }

  Response put_config(const Request& req) const {
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) throw Error(ErrorCode::config, "factor configuration must be a JSON object");
    auto cfg = ranking_config_from_json(body);
    auto warnings = session_.set_config(std::move(cfg), actor_of(req, body));
    auto v = session_.view();
    return json_response({{"config", to_json(v->config)},
                          {"config_digest", v->config_digest},
                          {"manifest_digest", v->manifest_digest},
                          {"warnings", warnings}});
  }

  Response ingest(const Request& req) const {
    LogFormat format = LogFormat::json_lines;
    std::string payload = req.body;
    auto ctype = req.header("content-type").value_or("");
    if (auto f = req.param("format")) format = parse_log_format(*f);
    else if (ctype.starts_with("text/csv")) format = LogFormat::csv;
    else if (ctype.starts_with("application/json")) {
      // A JSON document: an array of events or {"events": [...]}.
      auto doc = nlohmann::json::parse(payload, nullptr, false);
      if (doc.is_discarded()) throw Error(ErrorCode::ingest, "batch rejected: body is not JSON");
      const auto& arr = doc.is_object() && doc.contains("events") ? doc.at("events") : doc;
      if (!arr.is_array()) throw Error(ErrorCode::ingest, "batch rejected: expected an array of events");
      std::string lines;
      for (const auto& e : arr) lines += e.dump() + "\n";
      payload = std::move(lines);
    }
    std::istringstream in(payload);
    auto out = session_.ingest_batch(in, format, {}, req.header("x-actor").value_or("daily-job"));
    return json_response({{"report", to_json(out.report)}, {"manifest_digest", out.manifest_digest}, {"top", out.top}});
  }

  std::vector<Event> filtered(const Request& req, const SessionView& v) const {
    auto q = parse_query(req.param("filter").value_or(""));
    QueryContext ctx{&v.calendar, v.config.working_hours.end_of_shift_minutes};
    std::vector<Event> out;
    for (const auto& e : v.store->events())
      if (matches(q, e, ctx)) out.push_back(e);
    return out;
  }

  Response export_events(const Request& req) const {
    auto v = session_.view();
    auto format = parse_log_format(req.param("format").value_or("csv"));
    auto events = filtered(req, *v);
    std::ostringstream out;
    render::write_log(out, events, format);
    Response r{200, format == LogFormat::csv ? "text/csv" : "application/x-ndjson", out.str(), {}};
    r.headers["Content-Disposition"] =
        std::string("attachment; filename=\"events.") + (format == LogFormat::csv ? "csv" : "jsonl") + "\"";
    return r;
  }

  Response events(const Request& req) const {
    auto v = session_.view();
    auto q = parse_query(req.param("filter").value_or(""));
    std::size_t offset = req.param("offset") ? detail::parse_count(*req.param("offset"), "offset") : 0;
    std::size_t limit = req.param("limit") ? detail::parse_count(*req.param("limit"), "limit") : 1000;
    QueryContext ctx{&v->calendar, v->config.working_hours.end_of_shift_minutes};
    auto page = query_events(v->store->events(), q, offset, limit, ctx);
    nlohmann::json evs = nlohmann::json::array();
    for (const auto& e : page.events) evs.push_back(event_to_json(e));
    return json_response({{"events", evs},
                          {"total", page.total},
                          {"offset", page.offset},
                          {"limit", page.limit},
                          {"next_offset", page.next_offset ? nlohmann::json(*page.next_offset) : nlohmann::json(nullptr)}});
  }

  Session& session_;
  std::optional<std::string> token_;
};

}  // namespace fraudscope::service
