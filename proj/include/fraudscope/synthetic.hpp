#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/time.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fraudscope::synthetic {

// Synthetic audit data for tests, demos and benchmarks. The generator only
// uses raw mt19937_64 output, so a seed yields the same data everywhere.

struct Spec {
  std::size_t clients = 7200;
  std::size_t employees = 14;
  std::size_t events = 35000;  // total, injected included
  std::size_t injected = 20;   // clients with the monthly pre-billing pattern
  std::chrono::year_month first_month{std::chrono::year{2014}, std::chrono::January};
  int months = 12;
  double outside_hours_rate = 0.03;  // background events off shift
  std::uint64_t seed = 20140101;
};

struct Data {
  std::vector<Event> events;
  CalendarConfig calendar;
  std::vector<std::string> injected;  // client ids, ascending
  TimeWindow window;
};

inline std::string client_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%05zu", i + 1);
  return buf;
}

inline std::string employee_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%02zu", i + 1);
  return buf;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

/// Background clients get one to a few events scattered over the period,
/// each handled by whichever employee was available, mostly inside a
/// 08:00-17:00 weekday shift. Injected clients get one event per month a
/// fixed 0-3 days before their billing day, always by the same employee.
inline Data generate(const Spec& spec) {
  using namespace std::chrono;
  if (spec.clients == 0 || spec.employees == 0 || spec.months < 1 || spec.injected > spec.clients)
    throw Error(ErrorCode::argument, "invalid synthetic spec");
  Rng rng(spec.seed);
  Data out;

  const Date first = Date{spec.first_month / day{1}};
  const Date last = Date{(spec.first_month + months{spec.months - 1}) / std::chrono::last};
  const int span = static_cast<int>((last - first).count()) + 1;
  out.window = {Timestamp{first}, Timestamp{last} + minutes{24 * 60 - 1}};

  for (std::size_t u = 0; u < spec.employees; ++u)
    out.calendar.shifts[employee_name(u)] = ShiftSchedule::weekdays(employee_name(u), {8 * 60, 17 * 60});
  for (int m = 0; m < spec.months; ++m)
    if ((spec.first_month + months{m}).month() == January)
      out.calendar.holidays.holidays.insert(Date{(spec.first_month + months{m}) / day{1}});

  // Pick the injected clients among all ids.
  std::vector<std::size_t> ids(spec.clients);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  for (std::size_t i = 0; i < spec.injected; ++i) std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
  std::set<std::size_t> injected(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(spec.injected));

  auto at = [](Date d, int minute) { return Timestamp{d} + minutes{minute}; };
  const std::array<const char*, 5> actions{"view", "update", "payment", "invoice", "note"};

  for (std::size_t c : injected) {
    std::string id = client_name(c);
    unsigned billing = static_cast<unsigned>(rng.between(5, 28));
    int lead = rng.between(0, 3);
    std::string employee = employee_name(rng.below(spec.employees));
    out.calendar.profiles[id] = {id, billing, std::min(28u, billing + 10), ClientStatus::cleared};
    for (int m = 0; m < spec.months; ++m) {
      Date d = Date{(spec.first_month + months{m}) / day{billing}} - days{lead};
      out.events.push_back({at(d, rng.between(10 * 60, 13 * 60 + 59)), employee, id, "payment", "billing"});
    }
    out.injected.push_back(id);
  }
  std::sort(out.injected.begin(), out.injected.end());

  std::vector<std::size_t> background;
  for (std::size_t c = 0; c < spec.clients; ++c)
    if (!injected.contains(c)) background.push_back(c);
  if (background.empty()) return out;

  // One event each, the remainder spread at random.
  std::vector<std::size_t> count(background.size(), 1);
  const std::size_t budget = spec.events > out.events.size() + background.size()
                                 ? spec.events - out.events.size() - background.size()
                                 : 0;
  for (std::size_t i = 0; i < budget; ++i) ++count[rng.below(background.size())];

  for (std::size_t b = 0; b < background.size(); ++b) {
    std::string id = client_name(background[b]);
    unsigned billing = static_cast<unsigned>(rng.between(1, 28));
    out.calendar.profiles[id] = {id, billing, std::min(28u, billing + 10), ClientStatus::cleared};
    for (std::size_t k = 0; k < count[b]; ++k) {
      Date d = first + days{rng.below(static_cast<std::uint64_t>(span))};
      int minute;
      if (rng.unit() < spec.outside_hours_rate) {
        minute = rng.between(18 * 60, 21 * 60 + 59);
      } else {
        while (out.calendar.holidays.is_rest_day(d)) d = first + days{rng.below(static_cast<std::uint64_t>(span))};
        minute = rng.between(8 * 60, 14 * 60 + 59);
      }
      out.events.push_back({at(d, minute), employee_name(rng.below(spec.employees)), id, actions[rng.below(actions.size())],
                            std::string(kDefaultSourceSystem)});
    }
  }
  std::sort(out.events.begin(), out.events.end(), series_less);
  out.events.erase(std::unique(out.events.begin(), out.events.end()), out.events.end());
  return out;
}

}  // namespace fraudscope::synthetic
