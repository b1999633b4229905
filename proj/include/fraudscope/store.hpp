#pragma once

#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fraudscope {

/// Immutable, fully indexed view of the store at one point in time. Events
/// are held in series order, so every index list below is already ordered
/// by (timestamp, employee, action).
class StoreSnapshot {
 public:
  StoreSnapshot() = default;

  explicit StoreSnapshot(std::vector<Event> sorted_events) : events_(std::move(sorted_events)) {
    for (std::uint32_t i = 0; i < events_.size(); ++i) {
      const Event& e = events_[i];
      by_client_[e.client_id].push_back(i);
      by_employee_[e.employee_id].push_back(i);
      by_pair_[pair_key(e.employee_id, e.client_id)].push_back(i);
    }
  }

  std::span<const Event> events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  bool contains(const Event& e) const {
    auto it = std::lower_bound(events_.begin(), events_.end(), e, series_less);
    return it != events_.end() && *it == e;
  }

  std::vector<Event> by_client(std::string_view client, const std::optional<TimeWindow>& window = {}) const {
    return collect(by_client_, std::string(client), window);
  }
  std::vector<Event> by_employee(std::string_view employee, const std::optional<TimeWindow>& window = {}) const {
    return collect(by_employee_, std::string(employee), window);
  }
  std::vector<Event> by_pair(std::string_view employee, std::string_view client,
                             const std::optional<TimeWindow>& window = {}) const {
    return collect(by_pair_, pair_key(employee, client), window);
  }
  std::vector<Event> by_time(const TimeWindow& window) const {
    auto lo = std::partition_point(events_.begin(), events_.end(),
                                   [&](const Event& e) { return e.timestamp < window.begin; });
    auto hi = std::partition_point(lo, events_.end(), [&](const Event& e) { return e.timestamp <= window.end; });
    return {lo, hi};
  }

  /// Sorted distinct client ids.
  std::vector<std::string> clients() const { return keys(by_client_); }
  std::vector<std::string> employees() const { return keys(by_employee_); }

  bool has_client(std::string_view client) const { return by_client_.contains(std::string(client)); }

 private:
  using Index = std::unordered_map<std::string, std::vector<std::uint32_t>>;

  static std::string pair_key(std::string_view employee, std::string_view client) {
    std::string k(employee);
    k.push_back('\x1f');
    k += client;
    return k;
  }

  static std::vector<std::string> keys(const Index& idx) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (const auto& [k, _] : idx) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Event> collect(const Index& idx, const std::string& key, const std::optional<TimeWindow>& window) const {
    std::vector<Event> out;
    auto it = idx.find(key);
    if (it == idx.end()) return out;
    for (auto i : it->second)
      if (!window || window->contains(events_[i].timestamp)) out.push_back(events_[i]);
    return out;
  }

  std::vector<Event> events_;
  Index by_client_;
  Index by_employee_;
  Index by_pair_;
};

/// A batch validated against a snapshot but not yet visible to readers.
struct PendingBatch {
  std::shared_ptr<const StoreSnapshot> base;
  std::shared_ptr<const StoreSnapshot> next;
  IngestReport report;
};

/// Single-writer event store backed by one file. Readers grab a snapshot and
/// never block the writer; a batch either lands completely (file and memory)
/// or not at all.
///
/// File layout: a header line `{"format":"fraudscope-store","version":1}`
/// followed by one event object per line.
class EventStore {
 public:
  EventStore() : snapshot_(std::make_shared<StoreSnapshot>()) {}

  explicit EventStore(std::filesystem::path file) : file_(std::move(file)) {
    snapshot_ = std::make_shared<StoreSnapshot>(load(*file_));
  }

  std::shared_ptr<const StoreSnapshot> snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
  }

  const std::optional<std::filesystem::path>& file() const { return file_; }

  /// Builds the post-batch snapshot without publishing it.
  PendingBatch prepare(std::span<const Event> events) const {
    PendingBatch batch;
    batch.base = snapshot();
    std::set<Event, SeriesLess> fresh;
    for (const Event& e : events) {
      ++batch.report.accepted;
      batch.report.extend_range(e.timestamp);
      if (batch.base->contains(e) || !fresh.insert(e).second) ++batch.report.duplicates;
    }
    if (fresh.empty()) {
      batch.next = batch.base;
      return batch;
    }
    std::vector<Event> merged;
    merged.reserve(batch.base->size() + fresh.size());
    std::merge(batch.base->events().begin(), batch.base->events().end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged), series_less);
    batch.next = std::make_shared<StoreSnapshot>(std::move(merged));
    return batch;
  }

  /// Persists and publishes a prepared batch. Throws storage errors with the
  /// in-memory state untouched; fails if another batch landed in between.
  void commit(const PendingBatch& batch) {
    std::lock_guard writer(writer_mutex_);
    if (snapshot() != batch.base) throw Error(ErrorCode::internal, "stale batch: store changed since prepare");
    if (batch.next == batch.base) return;
    if (file_) persist(*file_, *batch.next);
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = batch.next;
  }

  IngestReport store_events(std::span<const Event> events) {
    std::lock_guard writer(batch_mutex_);
    auto batch = prepare(events);
    commit(batch);
    return batch.report;
  }

 private:
  static constexpr const char* kFormatTag = "fraudscope-store";

  static std::vector<Event> load(const std::filesystem::path& path) {
    std::vector<Event> events;
    if (!std::filesystem::exists(path)) return events;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::storage, "cannot open store file", path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::storage, "corrupt store file", path.string() + ":" + std::to_string(line_no));
      if (line_no == 1) {
        if (j.value("format", "") != kFormatTag) throw Error(ErrorCode::storage, "not a store file", path.string());
        continue;
      }
      events.push_back(event_from_json(j));
    }
    std::sort(events.begin(), events.end(), series_less);
    events.erase(std::unique(events.begin(), events.end()), events.end());
    return events;
  }

  static void persist(const std::filesystem::path& path, const StoreSnapshot& snap) {
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error(ErrorCode::storage, "cannot write store file", tmp.string());
      out << nlohmann::json{{"format", kFormatTag}, {"version", 1}}.dump() << '\n';
      for (const Event& e : snap.events()) {
        auto j = event_to_json(e);
        j.erase("key");
        out << j.dump() << '\n';
      }
      out.flush();
      if (!out) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::storage, "short write to store file", tmp.string());
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::storage, "cannot replace store file", path.string());
    }
  }

  std::optional<std::filesystem::path> file_;
  mutable std::mutex snapshot_mutex_;
  std::mutex writer_mutex_;
  std::mutex batch_mutex_;
  std::shared_ptr<const StoreSnapshot> snapshot_;
};

/// Events of one client inside the optional window, in series order.
inline EventSeries series_for_client(const StoreSnapshot& store, std::string_view client_id,
                                     const std::optional<TimeWindow>& window = {}) {
  if (window && window->end < window->begin) throw Error(ErrorCode::argument, "inverted time window");
  return {std::string(client_id), store.by_client(client_id, window)};
}

}  // namespace fraudscope
