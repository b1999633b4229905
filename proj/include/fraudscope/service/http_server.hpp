#pragma once

#include "fraudscope/service/api.hpp"

#include <httplib.h>

#include <cctype>
#include <string>

namespace fraudscope::service {

/// Serves an Api over HTTP. Blocking; call stop() from another thread.
class HttpServer {
 public:
  explicit HttpServer(const Api& api) : api_(api) {
    auto handler = [this](const httplib::Request& in, httplib::Response& out) { dispatch(in, out); };
    server_.Get(".*", handler);
    server_.Post(".*", handler);
    server_.Put(".*", handler);
    server_.Delete(".*", handler);
    server_.Patch(".*", handler);
  }

  /// Binds to a free port when `port` is 0; returns the bound port or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host);
    return server_.bind_to_port(host, port) ? port : -1;
  }

  bool listen() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  void dispatch(const httplib::Request& in, httplib::Response& out) const {
    Request req;
    req.method = in.method;
    req.path = in.path;
    req.body = in.body;
    for (const auto& [k, v] : in.params) req.query.emplace(k, v);
    for (const auto& [k, v] : in.headers) {
      std::string name = k;
      for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      req.headers.emplace(std::move(name), v);
    }
    auto res = api_.handle(req);
    out.status = res.status;
    for (const auto& [k, v] : res.headers) out.set_header(k, v);
    out.set_content(res.body, res.content_type);
  }

  const Api& api_;
  httplib::Server server_;
};

}  // namespace fraudscope::service
