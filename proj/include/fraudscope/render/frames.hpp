#pragma once

#include "fraudscope/digest.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/ranking.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fraudscope::render {

struct FrameEntry {
  std::string client_id;
  Rational score{0};
  std::string path;
  bool pinned = false;  // placed by the auditor's override list
  std::map<std::string, std::string> layout_digests;
};

/// The "video": frames in viewing order plus what produced them.
struct FrameManifest {
  std::optional<TimeWindow> window;
  std::string config_digest;
  double frame_seconds = 2.0;
  std::vector<FrameEntry> frames;
};

inline std::string frame_file_name(std::size_t index, std::string_view client_id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "frame_%05zu_", index + 1);
  std::string name = buf;
  for (char c : client_id) name.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  return name + ".svg";
}

/// Override clients first, in the given order, then everyone else in ranking
/// order (descending score, ascending id).
inline FrameManifest order_frames(std::span<const ClientRanking> rankings,
                                  std::span<const std::string> override_order = {}) {
  std::map<std::string, const ClientRanking*> by_id;
  for (const auto& r : rankings) by_id.emplace(r.client_id, &r);
  std::set<std::string> pinned;
  for (const auto& c : override_order) {
    if (!by_id.contains(c)) throw Error(ErrorCode::not_found, "override names an unknown client", c);
    if (!pinned.insert(c).second) throw Error(ErrorCode::argument, "override lists a client twice", c);
  }
  std::vector<const ClientRanking*> rest;
  for (const auto& r : rankings)
    if (!pinned.contains(r.client_id)) rest.push_back(&r);
  std::sort(rest.begin(), rest.end(), [](const auto* a, const auto* b) { return ranking_before(*a, *b); });

  FrameManifest m;
  auto add = [&](const ClientRanking& r, bool pin) {
    m.frames.push_back({r.client_id, r.score, frame_file_name(m.frames.size(), r.client_id), pin, {}});
  };
  for (const auto& c : override_order) add(*by_id.at(c), true);
  for (const auto* r : rest) add(*r, false);
  return m;
}

inline nlohmann::json to_json(const FrameManifest& m) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    const auto& f = m.frames[i];
    frames.push_back({{"index", i},
                      {"client_id", f.client_id},
                      {"score", to_double(f.score)},
                      {"score_exact", fraudscope::to_string(f.score)},
                      {"path", f.path},
                      {"pinned", f.pinned},
                      {"layout_digests", f.layout_digests}});
  }
  return {{"window", m.window ? nlohmann::json{format_timestamp(m.window->begin), format_timestamp(m.window->end)}
                              : nlohmann::json(nullptr)},
          {"config_digest", m.config_digest},
          {"frame_seconds", m.frame_seconds},
          {"frames", frames}};
}

inline FrameManifest manifest_from_json(const nlohmann::json& j) {
  FrameManifest m;
  try {
    if (!j.at("window").is_null()) {
      auto b = parse_timestamp(j.at("window").at(0).get<std::string>());
      auto e = parse_timestamp(j.at("window").at(1).get<std::string>());
      if (!b || !e) throw Error(ErrorCode::argument, "bad manifest window");
      m.window = make_window(*b, *e);
    }
    m.config_digest = j.at("config_digest").get<std::string>();
    m.frame_seconds = j.value("frame_seconds", m.frame_seconds);
    for (const auto& f : j.at("frames")) {
      m.frames.push_back({f.at("client_id").get<std::string>(), parse_rational(f.at("score_exact").get<std::string>()),
                          f.at("path").get<std::string>(), f.value("pinned", false),
                          f.value("layout_digests", std::map<std::string, std::string>{})});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::argument, "malformed frame manifest", e.what());
  }
  return m;
}

inline std::string manifest_digest(const FrameManifest& m) { return hex_digest(to_json(m).dump()); }

}  // namespace fraudscope::render
