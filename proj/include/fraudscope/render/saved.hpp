#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/render/frames.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

namespace fraudscope::render {

/// A produced visualization kept for later: the frame manifest plus the
/// layout documents of each client, exactly as served.
struct SavedVisualization {
  FrameManifest manifest;
  std::map<std::string, nlohmann::json> layouts;  // client id -> layout document
};

inline constexpr const char* kSavedFormat = "fraudscope-visualization";

inline nlohmann::json to_json(const SavedVisualization& v) {
  return {{"format", kSavedFormat}, {"version", 1}, {"manifest", to_json(v.manifest)}, {"layouts", v.layouts}};
}

inline SavedVisualization saved_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != kSavedFormat)
    throw Error(ErrorCode::argument, "not a saved visualization");
  if (j.value("version", 0) != 1) throw Error(ErrorCode::argument, "unsupported saved visualization version");
  SavedVisualization v;
  try {
    v.manifest = manifest_from_json(j.at("manifest"));
    for (const auto& [k, layout] : j.at("layouts").items()) v.layouts.emplace(k, layout);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::argument, "malformed saved visualization", e.what());
  }
  return v;
}

inline void save_visualization(const SavedVisualization& v, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::storage, "cannot write saved visualization", path.string());
    out << to_json(v).dump(2) << '\n';
    if (!out) throw Error(ErrorCode::storage, "write failed", path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::storage, "cannot move saved visualization into place", path.string());
}

inline SavedVisualization load_visualization(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::storage, "cannot read saved visualization", path.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::argument, "saved visualization is not JSON", path.string());
  return saved_from_json(j);
}

}  // namespace fraudscope::render
