#pragma once

#include "fraudscope/periodicity.hpp"
#include "fraudscope/render/layered.hpp"
#include "fraudscope/render/spiral.hpp"
#include "fraudscope/render/stacked_bar.hpp"
#include "fraudscope/render/timeline.hpp"

#include <nlohmann/json.hpp>

// JSON shapes of the layouts served to the console. Numbers are emitted as
// doubles; exact rationals additionally as "p/q" strings.

namespace fraudscope::render {

inline nlohmann::json to_json(const SectorRegion& r) {
  nlohmann::json days = nlohmann::json::array();
  for (const auto& d : r.days) days.push_back({d.first, d.last});
  return {{"kind", to_string(r.kind)}, {"days", days}, {"start_angle", r.start_angle}, {"end_angle", r.end_angle}};
}

inline nlohmann::json to_json(const SpiralLayout& s) {
  nlohmann::json branches = nlohmann::json::array(), nodes = nlohmann::json::array(),
                 regions = nlohmann::json::array();
  for (const auto& b : s.branches)
    branches.push_back({{"index", b.index},
                        {"label", b.label},
                        {"first", format_date(b.first)},
                        {"last", format_date(b.last)},
                        {"inner_radius", b.inner_radius},
                        {"outer_radius", b.outer_radius}});
  for (const auto& n : s.nodes)
    nodes.push_back({{"id", n.event_key},
                     {"client_id", n.client_id},
                     {"employee_id", n.employee_id},
                     {"action", n.action},
                     {"timestamp", format_timestamp(n.timestamp)},
                     {"branch", n.branch},
                     {"day", n.day_index},
                     {"angle", n.angle},
                     {"radius", n.radius},
                     {"color", n.color},
                     {"shape", n.shape}});
  for (const auto& r : s.regions) regions.push_back(to_json(r));
  return {{"period_days", s.config.period_days},
          {"mode", to_string(s.config.mode)},
          {"inner_radius", s.config.inner_radius},
          {"ring_spacing", s.config.ring_spacing},
          {"window", format_window(s.window)},
          {"branches", branches},
          {"nodes", nodes},
          {"regions", regions},
          {"ticks", s.ticks},
          {"excluded", s.excluded},
          {"collapsed", s.collapsed}};
}

inline nlohmann::json to_json(const LayeredLayout& l) {
  auto layer = [](const std::vector<LayerNode>& nodes) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& n : nodes) a.push_back({{"id", n.id}, {"x", n.x}, {"color", n.color}, {"events", n.events}});
    return a;
  };
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : l.edges)
    edges.push_back(
        {{"employee_id", e.employee_id}, {"client_id", e.client_id}, {"count", e.count}, {"thickness", e.thickness}});
  return {{"employees", layer(l.employees)}, {"clients", layer(l.clients)}, {"edges", edges}, {"spacing", l.spacing}};
}

inline nlohmann::json to_json(const TimelineLayout& t) {
  nlohmann::json days = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& d : t.days) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : d.nodes)
      nodes.push_back({{"id", n.event_key},
                       {"employee_id", n.employee_id},
                       {"action", n.action},
                       {"timestamp", format_timestamp(n.timestamp)},
                       {"band", to_string(n.band)},
                       {"x", n.x},
                       {"y", n.y}});
    days.push_back(
        {{"date", format_date(d.date)}, {"rest_day", d.rest_day}, {"boxed", d.boxed}, {"x", d.x}, {"nodes", nodes}});
  }
  for (const auto& e : t.edges) edges.push_back({{"from", e.from}, {"to", e.to}});
  return {{"client_id", t.client_id},
          {"days", days},
          {"edges", edges},
          {"day_spacing", t.day_spacing},
          {"band_height", t.band_height}};
}

inline nlohmann::json to_json(const LeastSquaresFit& f) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : f.points) pts.push_back({p.x, p.y});
  return {{"slope", f.slope},          {"intercept", f.intercept},     {"rmse", f.rmse}, {"n", f.n},
          {"period_days", f.period_days}, {"phase_shift", f.phase_shift}, {"points", pts}};
}

inline nlohmann::json to_json(const PeriodEstimate& p) {
  return {{"period_days", p.period_days ? nlohmann::json(*p.period_days) : nlohmann::json(nullptr)},
          {"support", p.support ? nlohmann::json(*p.support) : nlohmann::json(nullptr)},
          {"gaps", p.gaps}};
}

inline nlohmann::json to_json(const StackedBarData& d) {
  nlohmann::json bars = nlohmann::json::array();
  for (const auto& b : d.bars) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : b.segments)
      segs.push_back({{"factor", to_string(s.factor)},
                      {"rank", s.rank},
                      {"performance", s.performance},
                      {"length", rational_json(s.length)}});
    bars.push_back({{"client_id", b.client_id}, {"total", rational_json(b.total)}, {"segments", segs}});
  }
  return {{"bars", bars}};
}

}  // namespace fraudscope::render
