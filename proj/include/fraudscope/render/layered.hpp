#pragma once

#include "fraudscope/event.hpp"
#include "fraudscope/ranking.hpp"
#include "fraudscope/render/spiral.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fraudscope::render {

struct LayerNode {
  std::string id;
  double x = 0;
  std::string color;
  std::size_t events = 0;
};

struct LayerEdge {
  std::string employee_id;
  std::string client_id;
  std::size_t count = 0;
  double thickness = 1;
};

/// Two-layer employee/client graph: employees on top (by id), clients at the
/// bottom in ranking order. Edge thickness grows with the pair's event count.
struct LayeredLayout {
  std::vector<LayerNode> employees;
  std::vector<LayerNode> clients;
  std::vector<LayerEdge> edges;
  double spacing = 60;
};

inline double edge_thickness(std::size_t count) { return 1.0 + std::log2(static_cast<double>(count)); }

inline LayeredLayout layered_layout(std::span<const Event> events, std::span<const ClientRanking> rankings,
                                    const std::optional<std::string>& client_filter = std::nullopt) {
  LayeredLayout out;
  std::map<std::pair<std::string, std::string>, std::size_t> pairs;
  std::map<std::string, std::size_t> per_employee, per_client;
  for (const auto& e : events) {
    if (client_filter && e.client_id != *client_filter) continue;
    ++pairs[{e.employee_id, e.client_id}];
    ++per_employee[e.employee_id];
    ++per_client[e.client_id];
  }

  std::vector<std::string> client_order;
  std::set<std::string> placed;
  for (const auto& r : rankings)
    if (per_client.contains(r.client_id) && placed.insert(r.client_id).second) client_order.push_back(r.client_id);
  for (const auto& [c, _] : per_client)
    if (placed.insert(c).second) client_order.push_back(c);

  double x = 0;
  for (const auto& [emp, n] : per_employee) {
    out.employees.push_back({emp, x, color_key(emp), n});
    x += out.spacing;
  }
  x = 0;
  for (const auto& c : client_order) {
    out.clients.push_back({c, x, color_key(c), per_client[c]});
    x += out.spacing;
  }
  for (const auto& [key, n] : pairs) out.edges.push_back({key.first, key.second, n, edge_thickness(n)});
  return out;
}

}  // namespace fraudscope::render
