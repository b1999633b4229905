#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/ranking.hpp"
#include "fraudscope/render/spiral.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fraudscope::render {

/// Extra content drawn on a frame besides the spiral itself.
struct FrameAnnotations {
  std::size_t frame_index = 0;
  std::optional<ClientProfile> profile;    // billing / due day markers
  std::vector<FactorScore> factor_scores;  // legend
};

namespace svg {

inline std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Shape per source system: the default system is a circle, others cycle
/// through square, diamond and triangle.
inline int shape_index(std::string_view system) {
  if (system == kDefaultSourceSystem) return 0;
  return 1 + static_cast<int>(fnv1a(system) % 3);
}

struct Canvas {
  double cx = 400;
  double cy = 430;
  double scale = 1;

  // Angle 0 points up; angles grow clockwise like a clock face.
  double x(double r, double angle) const { return cx + scale * r * std::sin(angle); }
  double y(double r, double angle) const { return cy - scale * r * std::cos(angle); }
};

}  // namespace svg

/// Self-contained SVG 1.1 document for one client frame. Event nodes carry
/// the event key as element id so that other views can cross-highlight.
/// Output is byte-for-byte deterministic.
inline std::string render_frame(std::string_view client_id, const Rational& score, const SpiralLayout& spiral,
                                const FrameAnnotations& notes = {}) {
  using svg::num;
  const auto& cfg = spiral.config;
  const int turns = std::max<int>(1, static_cast<int>(spiral.branches.size()));
  const double outer = spiral_radius(cfg, turns, 0);
  svg::Canvas cv;
  cv.scale = 350.0 / outer;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"860\" viewBox=\"0 0 800 860\">\n"
    << "<title>" << svg::escape(client_id) << "</title>\n"
    << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"860\" fill=\"#ffffff\"/>\n"
    << "<text id=\"frame-title\" x=\"20\" y=\"30\" font-family=\"sans-serif\" font-size=\"18\">Frame "
    << notes.frame_index + 1 << ": client " << svg::escape(client_id) << " (R=" << svg::escape(fraudscope::to_string(score))
    << ", " << num(to_double(score)) << ")</text>\n"
    << "<text id=\"frame-window\" x=\"20\" y=\"52\" font-family=\"sans-serif\" font-size=\"12\">"
    << svg::escape(format_window(spiral.window)) << " | " << to_string(cfg.mode) << " | " << cfg.period_days
    << "-day view</text>\n";

  // Regions under everything else.
  o << "<g id=\"regions\">\n";
  for (std::size_t i = 0; i < spiral.regions.size(); ++i) {
    const auto& r = spiral.regions[i];
    double a0 = r.start_angle, a1 = r.end_angle;
    if (a1 <= a0) a1 += kTwoPi;
    const char* fill = r.kind == RegionKind::radial_cluster ? "#e41a1c" : r.kind == RegionKind::billing_window ? "#bdbdbd" : "#9ecae1";
    double rin = cfg.inner_radius, rout = outer;
    int large = a1 - a0 > std::numbers::pi ? 1 : 0;
    o << "<path id=\"region-" << i << "\" class=\"region " << to_string(r.kind) << "\" fill=\"" << fill
      << "\" fill-opacity=\"0.35\" d=\"M " << num(cv.x(rin, a0)) << ' ' << num(cv.y(rin, a0)) << " L "
      << num(cv.x(rout, a0)) << ' ' << num(cv.y(rout, a0)) << " A " << num(cv.scale * rout) << ' '
      << num(cv.scale * rout) << " 0 " << large << " 1 " << num(cv.x(rout, a1)) << ' ' << num(cv.y(rout, a1))
      << " L " << num(cv.x(rin, a1)) << ' ' << num(cv.y(rin, a1)) << " A " << num(cv.scale * rin) << ' '
      << num(cv.scale * rin) << " 0 " << large << " 0 " << num(cv.x(rin, a0)) << ' ' << num(cv.y(rin, a0))
      << " Z\"/>\n";
  }
  o << "</g>\n";

  // Day division ticks.
  o << "<g id=\"ticks\" stroke=\"#dddddd\" stroke-width=\"0.5\">\n";
  for (std::size_t i = 0; i < spiral.ticks.size(); ++i) {
    double a = spiral.ticks[i];
    o << "<line id=\"tick-" << i << "\" x1=\"" << num(cv.x(cfg.inner_radius, a)) << "\" y1=\""
      << num(cv.y(cfg.inner_radius, a)) << "\" x2=\"" << num(cv.x(outer, a)) << "\" y2=\"" << num(cv.y(outer, a))
      << "\"/>\n";
  }
  o << "</g>\n";

  // Spiral branches with their labels.
  o << "<g id=\"branches\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\">\n";
  for (const auto& b : spiral.branches) {
    o << "<polyline id=\"branch-" << b.index << "\" points=\"";
    constexpr int kSteps = 96;
    for (int s = 0; s <= kSteps; ++s) {
      double a = kTwoPi * s / kSteps;
      double r = spiral_radius(cfg, b.index, a);
      o << (s ? " " : "") << num(cv.x(r, a)) << ',' << num(cv.y(r, a));
    }
    o << "\"/>\n";
  }
  o << "</g>\n<g id=\"branch-labels\" font-family=\"sans-serif\" font-size=\"9\" fill=\"#333333\">\n";
  for (const auto& b : spiral.branches)
    o << "<text id=\"branch-label-" << b.index << "\" x=\"" << num(cv.x(b.inner_radius, 0) + 3) << "\" y=\""
      << num(cv.y(b.inner_radius, 0) - 2) << "\">" << svg::escape(b.label) << "</text>\n";
  o << "</g>\n";

  // Billing and due day markers.
  if (notes.profile && cfg.month_view()) {
    o << "<g id=\"schedule-markers\" stroke-width=\"2\" font-family=\"sans-serif\" font-size=\"11\">\n";
    auto marker = [&](const char* id, const char* color, const char* label, unsigned day) {
      double a = day_angle(static_cast<int>(day), cfg.divisions());
      o << "<line id=\"" << id << "\" stroke=\"" << color << "\" x1=\"" << num(cv.x(cfg.inner_radius, a)) << "\" y1=\""
        << num(cv.y(cfg.inner_radius, a)) << "\" x2=\"" << num(cv.x(outer + 8, a)) << "\" y2=\""
        << num(cv.y(outer + 8, a)) << "\"/>\n<text x=\"" << num(cv.x(outer + 16, a)) << "\" y=\""
        << num(cv.y(outer + 16, a)) << "\" fill=\"" << color << "\" text-anchor=\"middle\">" << label << ' ' << day
        << "</text>\n";
    };
    if (notes.profile->billing_day) marker("billing-day", "#636363", "billing", *notes.profile->billing_day);
    if (notes.profile->due_day) marker("due-day", "#3182bd", "due", *notes.profile->due_day);
    o << "</g>\n";
  }

  // Event nodes.
  o << "<g id=\"nodes\" stroke=\"#000000\" stroke-width=\"0.5\">\n";
  for (const auto& n : spiral.nodes) {
    double x = cv.x(n.radius, n.angle), y = cv.y(n.radius, n.angle);
    std::string common = "id=\"" + svg::escape(n.event_key) + "\" class=\"event-node\" data-client=\"" +
                         svg::escape(n.client_id) + "\" data-employee=\"" + svg::escape(n.employee_id) +
                         "\" data-time=\"" + format_timestamp(n.timestamp) + "\" data-system=\"" +
                         svg::escape(n.shape) + "\" fill=\"" + n.color + "\"";
    constexpr double s = 5;
    switch (svg::shape_index(n.shape)) {
      case 0: o << "<circle " << common << " cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(s) << "\"/>\n"; break;
      case 1:
        o << "<rect " << common << " x=\"" << num(x - s) << "\" y=\"" << num(y - s) << "\" width=\"" << num(2 * s)
          << "\" height=\"" << num(2 * s) << "\"/>\n";
        break;
      case 2:
        o << "<polygon " << common << " points=\"" << num(x) << ',' << num(y - s) << ' ' << num(x + s) << ',' << num(y)
          << ' ' << num(x) << ',' << num(y + s) << ' ' << num(x - s) << ',' << num(y) << "\"/>\n";
        break;
      default:
        o << "<polygon " << common << " points=\"" << num(x) << ',' << num(y - s) << ' ' << num(x + s) << ','
          << num(y + s) << ' ' << num(x - s) << ',' << num(y + s) << "\"/>\n";
    }
  }
  o << "</g>\n";

  // Factor legend.
  if (!notes.factor_scores.empty()) {
    o << "<g id=\"factor-legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    double y = 820;
    for (std::size_t i = 0; i < notes.factor_scores.size(); ++i) {
      const auto& f = notes.factor_scores[i];
      double x = 20 + static_cast<double>(i % 3) * 260;
      if (i > 0 && i % 3 == 0) y += 16;
      o << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\">" << to_string(f.factor) << ": "
        << (f.skipped ? std::string("skipped") : std::to_string(f.performance)) << "</text>\n";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace fraudscope::render
