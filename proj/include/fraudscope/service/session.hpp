#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/ingest.hpp"
#include "fraudscope/periodicity.hpp"
#include "fraudscope/ranking.hpp"
#include "fraudscope/render/frames.hpp"
#include "fraudscope/render/json.hpp"
#include "fraudscope/render/spiral.hpp"
#include "fraudscope/render/svg.hpp"
#include "fraudscope/render/timeline.hpp"
#include "fraudscope/store.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fraudscope::service {

struct AuditEntry {
  std::size_t seq = 0;
  std::string actor;
  std::string when;  // UTC, ISO 8601 seconds
  std::string what;  // "status", "config", "ingest", "window", "frame_order"
  nlohmann::json detail;
};

inline nlohmann::json to_json(const AuditEntry& a) {
  return {{"seq", a.seq}, {"actor", a.actor}, {"when", a.when}, {"what", a.what}, {"detail", a.detail}};
}

inline AuditEntry audit_from_json(const nlohmann::json& j) {
  return {j.at("seq").get<std::size_t>(), j.at("actor").get<std::string>(), j.at("when").get<std::string>(),
          j.at("what").get<std::string>(), j.value("detail", nlohmann::json(nullptr))};
}

inline std::string utc_now() {
  auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Everything a reader needs, computed together and never modified after
/// publication. Readers keep the pointer for the duration of a request.
struct SessionView {
  std::shared_ptr<const StoreSnapshot> store;
  RankingConfig config;
  CalendarConfig calendar;
  std::optional<TimeWindow> window;           // auditor-selected; nullopt = whole data set
  std::vector<std::string> frame_order;       // auditor override
  render::SpiralConfig spiral;
  RankingResult rankings;
  render::FrameManifest manifest;
  std::string config_digest;
  std::string rankings_digest;
  std::string manifest_digest;

  /// Window the views are drawn over: the selected one, else the dates
  /// spanned by the store.
  std::optional<TimeWindow> display_window() const {
    if (window) return window;
    if (store->size() == 0) return std::nullopt;
    Date first = date_of(store->events().front().timestamp), last = first;
    for (const auto& e : store->events()) last = std::max(last, date_of(e.timestamp));
    return TimeWindow{Timestamp{first}, Timestamp{last} + std::chrono::minutes{24 * 60 - 1}};
  }

  const ClientRanking* ranking(std::string_view client) const {
    for (const auto& r : rankings.clients)
      if (r.client_id == client) return &r;
    return nullptr;
  }
};

/// Spiral of one client with billing/due windows and month-to-month
/// clusters attached.
inline render::SpiralLayout client_spiral(const SessionView& v, const EventSeries& series, const TimeWindow& window) {
  auto layout = render::spiral_layout(series.events, window, v.spiral);
  auto profile = v.calendar.profile_or_default(series.client_id);
  for (auto target : {ScheduleTarget::billing, ScheduleTarget::due})
    if (auto r = render::billing_window_region(profile, target, v.spiral)) layout.regions.push_back(*r);
  EventSeries in_window{series.client_id, {}};
  for (const auto& e : series.events)
    if (window.contains(e.timestamp)) in_window.events.push_back(e);
  for (auto& r : render::radial_cluster_regions(in_window, 3, v.spiral)) layout.regions.push_back(std::move(r));
  return layout;
}

/// Layout bundle for one client: spiral, timeline, least-squares fit,
/// period estimate and regions.
inline nlohmann::json client_layouts(const SessionView& v, std::string_view client_id) {
  if (!v.store->has_client(client_id)) throw Error(ErrorCode::not_found, "unknown client", std::string(client_id));
  auto series = series_for_client(*v.store, client_id, v.window);
  nlohmann::json out{{"client_id", client_id}};
  auto window = v.display_window();
  if (window) {
    auto spiral = client_spiral(v, series, *window);
    out["spiral"] = render::to_json(spiral);
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& r : spiral.regions) regions.push_back(render::to_json(r));
    out["regions"] = regions;
  } else {
    out["spiral"] = nullptr;
    out["regions"] = nlohmann::json::array();
  }
  out["timeline"] = render::to_json(render::timeline_layout(series, v.calendar, v.config.working_hours.end_of_shift_minutes));
  auto dedup = dedupe_daily(series);
  out["least_squares"] = dedup.size() >= 2 ? render::to_json(least_squares_fit(dedup, v.spiral.period_days))
                                           : nlohmann::json(nullptr);
  out["period"] = render::to_json(proper_period(series, v.config.periodicity.estimator));
  return out;
}

/// SVG of frame `index` in the manifest.
inline std::string frame_svg(const SessionView& v, std::size_t index) {
  if (index >= v.manifest.frames.size())
    throw Error(ErrorCode::not_found, "no such frame", std::to_string(index));
  const auto& f = v.manifest.frames[index];
  auto series = series_for_client(*v.store, f.client_id, v.window);
  auto layout = client_spiral(v, series, *v.display_window());
  render::FrameAnnotations notes;
  notes.frame_index = index;
  notes.profile = v.calendar.profile_or_default(f.client_id);
  if (const auto* r = v.ranking(f.client_id)) notes.factor_scores = r->factor_scores;
  return render::render_frame(f.client_id, f.score, layout, notes);
}

struct SessionOptions {
  std::optional<std::filesystem::path> state_file;  // config, calendar, window, audit trail
  render::SpiralConfig spiral;
  bool layout_digests = true;
};

struct IngestOutcome {
  IngestReport report;
  std::string manifest_digest;
  std::vector<std::string> top;  // first manifest entries after the batch
};

/// Auditor session: the current view plus serialized mutations. Each
/// mutation computes a complete new view off to the side and publishes it
/// only once everything (including persistence) has succeeded, so readers
/// see either the old state or the new one.
class Session {
 public:
  Session(EventStore& store, RankingConfig config, CalendarConfig calendar, SessionOptions options = {})
      : store_(store), options_(std::move(options)) {
    std::optional<TimeWindow> window;
    std::vector<std::string> order;
    if (options_.state_file && std::filesystem::exists(*options_.state_file))
      load_state(*options_.state_file, config, calendar, window, order);
    view_ = build(store_.snapshot(), std::move(config), std::move(calendar), window, std::move(order));
  }

  std::shared_ptr<const SessionView> view() const {
    std::lock_guard lock(view_mutex_);
    return view_;
  }

  std::vector<AuditEntry> audit_trail() const {
    std::lock_guard lock(view_mutex_);
    return audit_;
  }

  /// Appends a batch and re-ranks. A batch with any rejected record is
  /// refused as a whole.
  IngestOutcome ingest_batch(std::istream& payload, LogFormat format, const SchemaMap& schema = {},
                             const std::string& actor = "daily-job") {
    std::lock_guard writer(writer_mutex_);
    auto parsed = parse_log(payload, format, schema);
    if (parsed.report.rejected > 0) {
      std::ostringstream why;
      for (const auto& r : parsed.report.rejection_reasons) why << "line " << r.line << ": " << r.reason << "; ";
      throw Error(ErrorCode::ingest, "batch rejected: " + std::to_string(parsed.report.rejected) + " malformed record(s)",
                  why.str());
    }
    auto batch = store_.prepare(parsed.events);
    auto cur = view();
    auto next = build(batch.next, cur->config, cur->calendar, cur->window, cur->frame_order);
    IngestOutcome out{batch.report, next->manifest_digest, {}};
    for (std::size_t i = 0; i < next->manifest.frames.size() && i < 5; ++i)
      out.top.push_back(next->manifest.frames[i].client_id);
    if (batch.next == batch.base) return out;
    auto audit = with_entry(actor, "ingest", to_json(batch.report));
    store_.commit(batch);
    commit_state(std::move(next), std::move(audit));
    return out;
  }

  ClientRanking set_client_status(const std::string& client_id, ClientStatus status, const std::string& actor) {
    std::lock_guard writer(writer_mutex_);
    auto cur = view();
    if (!cur->store->has_client(client_id) && !cur->calendar.profile(client_id))
      throw Error(ErrorCode::not_found, "unknown client", client_id);
    auto calendar = cur->calendar;
    auto profile = calendar.profile_or_default(client_id);
    auto before = profile.status;
    profile.status = status;
    calendar.profiles[client_id] = profile;
    auto next = build(cur->store, cur->config, std::move(calendar), cur->window, cur->frame_order);
    auto audit = with_entry(actor, "status",
                            {{"client_id", client_id}, {"from", to_string(before)}, {"to", to_string(status)}});
    ClientRanking updated;
    if (const auto* r = next->ranking(client_id)) updated = *r;
    else updated.client_id = client_id;
    commit_state(std::move(next), std::move(audit));
    return updated;
  }

  /// Replaces the factor configuration; returns validation warnings.
  std::vector<std::string> set_config(RankingConfig config, const std::string& actor) {
    std::lock_guard writer(writer_mutex_);
    auto warnings = config.validate();
    auto cur = view();
    auto detail = nlohmann::json{{"from", cur->config_digest}, {"to", fraudscope::config_digest(config)}};
    auto next = build(cur->store, std::move(config), cur->calendar, cur->window, cur->frame_order);
    commit_state(std::move(next), with_entry(actor, "config", std::move(detail)));
    return warnings;
  }

  void set_window(std::optional<TimeWindow> window, const std::string& actor) {
    std::lock_guard writer(writer_mutex_);
    auto cur = view();
    auto next = build(cur->store, cur->config, cur->calendar, window, cur->frame_order);
    auto detail = window ? nlohmann::json(format_window(*window)) : nlohmann::json(nullptr);
    commit_state(std::move(next), with_entry(actor, "window", std::move(detail)));
  }

  void set_frame_order(std::vector<std::string> order, const std::string& actor) {
    std::lock_guard writer(writer_mutex_);
    auto cur = view();
    auto next = build(cur->store, cur->config, cur->calendar, cur->window, order);
    commit_state(std::move(next), with_entry(actor, "frame_order", order));
  }

  /// Rankings over an ad-hoc window; the session itself is not changed.
  RankingResult rank_window(const std::optional<TimeWindow>& window) const {
    auto v = view();
    if (window == v->window) return v->rankings;
    return rank_all(*v->store, window, v->config, v->calendar);
  }

 private:
  std::shared_ptr<const SessionView> build(std::shared_ptr<const StoreSnapshot> store, RankingConfig config,
                                           CalendarConfig calendar, std::optional<TimeWindow> window,
                                           std::vector<std::string> order) const {
    auto v = std::make_shared<SessionView>();
    v->store = std::move(store);
    v->config = std::move(config);
    v->calendar = std::move(calendar);
    v->window = window;
    v->spiral = options_.spiral;
    v->rankings = rank_all(*v->store, v->window, v->config, v->calendar);
    v->config_digest = fraudscope::config_digest(v->config);
    v->rankings_digest = fraudscope::rankings_digest(v->rankings);

    // Override entries for clients that dropped out of scope are ignored.
    std::vector<std::string> usable;
    for (const auto& c : order)
      if (v->ranking(c)) usable.push_back(c);
    v->frame_order = std::move(order);
    v->manifest = render::order_frames(v->rankings.clients, usable);
    v->manifest.window = v->display_window();
    v->manifest.config_digest = v->config_digest;
    if (options_.layout_digests && v->manifest.window) {
      for (auto& f : v->manifest.frames) {
        auto series = series_for_client(*v->store, f.client_id, v->window);
        f.layout_digests["spiral"] = hex_digest(render::to_json(client_spiral(*v, series, *v->manifest.window)).dump());
      }
    }
    v->manifest_digest = render::manifest_digest(v->manifest);
    return v;
  }

  std::vector<AuditEntry> with_entry(const std::string& actor, std::string what, nlohmann::json detail) const {
    std::lock_guard lock(view_mutex_);
    auto audit = audit_;
    audit.push_back({audit.size() + 1, actor.empty() ? std::string("unknown") : actor, utc_now(), std::move(what),
                     std::move(detail)});
    return audit;
  }

  void commit_state(std::shared_ptr<const SessionView> next, std::vector<AuditEntry> audit) {
    if (options_.state_file) save_state(*options_.state_file, *next, audit);
    publish(std::move(next), std::move(audit));
  }

  void publish(std::shared_ptr<const SessionView> next, std::vector<AuditEntry> audit) {
    std::lock_guard lock(view_mutex_);
    view_ = std::move(next);
    audit_ = std::move(audit);
  }

  static void save_state(const std::filesystem::path& path, const SessionView& v, const std::vector<AuditEntry>& audit) {
    nlohmann::json trail = nlohmann::json::array();
    for (const auto& a : audit) trail.push_back(to_json(a));
    nlohmann::json j{{"format", "fraudscope-session"},
                     {"version", 1},
                     {"config", to_json(v.config)},
                     {"calendar", to_json(v.calendar)},
                     {"window", v.window ? nlohmann::json(format_window(*v.window)) : nlohmann::json(nullptr)},
                     {"frame_order", v.frame_order},
                     {"audit", trail}};
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error(ErrorCode::storage, "cannot write session state", path.string());
      out << j.dump(2) << '\n';
      if (!out) throw Error(ErrorCode::storage, "short write to session state", path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::storage, "cannot replace session state", path.string());
  }

  void load_state(const std::filesystem::path& path, RankingConfig& config, CalendarConfig& calendar,
                  std::optional<TimeWindow>& window, std::vector<std::string>& order) {
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "fraudscope-session")
      throw Error(ErrorCode::storage, "not a session state file", path.string());
    try {
      config = ranking_config_from_json(j.at("config"));
      calendar = calendar_from_json(j.at("calendar"));
      if (!j.at("window").is_null()) window = parse_window(j.at("window").get<std::string>());
      order = j.value("frame_order", std::vector<std::string>{});
      for (const auto& a : j.at("audit")) audit_.push_back(audit_from_json(a));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::storage, "corrupt session state", e.what());
    }
  }

  EventStore& store_;
  SessionOptions options_;
  std::mutex writer_mutex_;
  mutable std::mutex view_mutex_;
  std::shared_ptr<const SessionView> view_;
  std::vector<AuditEntry> audit_;
};

}  // namespace fraudscope::service
