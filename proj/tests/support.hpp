#pragma once

// Shared fixtures for the unit and acceptance tests.

#include "fraudscope/fraudscope.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace fstest {

using namespace fraudscope;

inline Timestamp ts(const std::string& s) {
  auto t = parse_timestamp(s);
  if (!t) throw std::runtime_error("bad test timestamp " + s);
  return *t;
}

inline Date day(const std::string& s) {
  auto d = parse_date(s);
  if (!d) throw std::runtime_error("bad test date " + s);
  return *d;
}

inline Event ev(const std::string& when, const std::string& employee, const std::string& client,
                const std::string& action = "VIEW", const std::string& source = kDefaultSourceSystem) {
  return {ts(when), employee, client, action, source};
}

inline EventSeries series_on(const std::string& client, const std::vector<std::string>& times,
                             const std::string& employee = "u1") {
  std::vector<Event> out;
  for (const auto& t : times) out.push_back(ev(t, employee, client));
  return make_series(client, std::move(out));
}

/// Events at 12:00 on the given day offsets from a base date.
inline EventSeries series_at_offsets(const std::vector<int>& offsets, Date base = Date{std::chrono::year{2014} / 1 / 1},
                                     const std::string& client = "c1") {
  std::vector<Event> out;
  for (int o : offsets)
    out.push_back({Timestamp{base + std::chrono::days{o}} + std::chrono::hours{12}, "u1", client, "VIEW", "default"});
  return make_series(client, std::move(out));
}

inline ClientProfile profile(const std::string& id, std::optional<unsigned> billing,
                             std::optional<unsigned> due = std::nullopt, ClientStatus st = ClientStatus::cleared) {
  return {id, billing, due, st};
}

/// Deterministic random helpers built on raw mt19937_64 output.
class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}
  int between(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53); }
  bool chance(double p) { return uniform(0, 1) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Random event in 2014 with small id alphabets so that collisions happen.
inline Event random_event(Random& r, int clients = 5, int employees = 4) {
  Date d = Date{std::chrono::year{2014} / 1 / 1} + std::chrono::days{r.between(0, 364)};
  Timestamp t = Timestamp{d} + std::chrono::minutes{r.between(0, 24 * 60 - 1)};
  static const std::vector<std::string> actions{"VIEW", "MODIFY_INVOICE", "DELETE_INVOICE", "REFUND", "NOTE"};
  static const std::vector<std::string> systems{"default", "billing", "crm"};
  return {t, "u" + std::to_string(r.between(1, employees)), "c" + std::to_string(r.between(1, clients)),
          r.pick(actions), r.pick(systems)};
}

}  // namespace fstest
