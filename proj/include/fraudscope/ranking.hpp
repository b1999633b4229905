#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/digest.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/periodicity.hpp"
#include "fraudscope/rational.hpp"
#include "fraudscope/store.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fraudscope {

// ---------------------------------------------------------------------------
// Factors and their configuration
// ---------------------------------------------------------------------------

/// `due_distance` is the billing-distance classifier aimed at the due day.
enum class FactorId {
  billing_distance,
  due_distance,
  periodicity,
  working_hours,
  employee_concentration,
  action_name,
  client_status,
};

inline constexpr std::array<FactorId, 7> kAllFactors{
    FactorId::billing_distance,       FactorId::due_distance, FactorId::periodicity, FactorId::working_hours,
    FactorId::employee_concentration, FactorId::action_name,  FactorId::client_status};

inline std::string_view to_string(FactorId f) {
  switch (f) {
    case FactorId::billing_distance: return "billing_distance";
    case FactorId::due_distance: return "due_distance";
    case FactorId::periodicity: return "periodicity";
    case FactorId::working_hours: return "working_hours";
    case FactorId::employee_concentration: return "employee_concentration";
    case FactorId::action_name: return "action_name";
    case FactorId::client_status: return "client_status";
  }
  return "?";
}

inline FactorId parse_factor_id(std::string_view s) {
  for (FactorId f : kAllFactors)
    if (to_string(f) == s) return f;
  throw Error(ErrorCode::config, "unknown factor", std::string(s));
}

enum class Severity { low, medium, high };

inline std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::low: return "low";
    case Severity::medium: return "medium";
    case Severity::high: return "high";
  }
  return "low";
}

inline Severity severity_of(int performance) {
  switch (performance) {
    case 0: return Severity::low;
    case 1: return Severity::medium;
    case 2: return Severity::high;
  }
  throw Error(ErrorCode::internal, "performance must be 0, 1 or 2", std::to_string(performance));
}

inline int performance_of(Severity s) { return static_cast<int>(s); }

struct FactorScore {
  FactorId factor = FactorId::billing_distance;
  int performance = 0;  // 0 low, 1 medium, 2 high
  Severity severity = Severity::low;
  std::string explanation;
  bool skipped = false;  // missing input data; excluded from the score

  bool operator==(const FactorScore&) const = default;
};

inline FactorScore make_score(FactorId f, Severity s, std::string why) {
  return {f, performance_of(s), s, std::move(why), false};
}

inline FactorScore skipped_score(FactorId f, std::string why) {
  return {f, 0, Severity::low, std::move(why), true};
}

struct BillingThresholds {
  int near_days = 3;        // D0: d <= near_days
  int week_days = 7;        // D1: near_days < d <= week_days, D2: d > week_days
  int quiet_threshold = 5;  // MEDIUM if |D2| > quiet_threshold
  // The printed HIGH rule |D0|+|D1| >= 2 would swallow MEDIUM's |D1| = 2
  // case; by default it is applied only when |D0| >= 1.
  bool literal_high_rule = false;
};

struct PeriodicityThresholds {
  int high_min = 27;
  int high_max = 31;
  int medium_min = 20;  // MEDIUM: medium_min <= p < high_min
  std::size_t min_events = 3;
  PeriodOptions estimator;
};

struct WorkingHoursThresholds {
  int end_of_shift_minutes = kDefaultEndOfShiftMinutes;
  std::size_t high_min_events = 1;    // events outside hours
  std::size_t medium_min_events = 2;  // events in the end-of-shift window
};

struct ConcentrationThresholds {
  int percent = 50;  // covering set must handle strictly more than this share
  std::size_t high_max_employees = 1;
  std::size_t medium_max_employees = 3;
};

enum class ActionSeverity { medium, high };

/// `high` actions are forbidden unless the employee is in `authorized`
/// (no list: forbidden for everybody). `medium` actions are suspicious for
/// everybody.
struct ActionRule {
  ActionSeverity severity = ActionSeverity::medium;
  std::optional<std::set<std::string>> authorized;
};

using ActionRules = std::map<std::string, ActionRule>;

struct FactorConfig {
  FactorId factor = FactorId::billing_distance;
  int rank = 1;
  bool enabled = true;
};

enum class EmployeeMode { max, threshold };

struct EmployeeRankingMode {
  EmployeeMode mode = EmployeeMode::max;
  Rational tau{1};
};

struct RankingConfig {
  std::vector<FactorConfig> factors;
  BillingThresholds billing;
  PeriodicityThresholds periodicity;
  WorkingHoursThresholds working_hours;
  ConcentrationThresholds concentration;
  ActionRules actions;
  EmployeeRankingMode employee_mode;

  /// The six factors in the order they are usually prioritised.
  static RankingConfig defaults() {
    RankingConfig c;
    c.factors = {{FactorId::billing_distance, 1, true},       {FactorId::periodicity, 2, true},
                 {FactorId::working_hours, 3, true},          {FactorId::employee_concentration, 4, true},
                 {FactorId::action_name, 5, true},            {FactorId::client_status, 6, true}};
    return c;
  }

  /// Enabled factors sorted by rank position.
  std::vector<FactorConfig> enabled() const {
    std::vector<FactorConfig> out;
    for (const auto& f : factors)
      if (f.enabled) out.push_back(f);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    return out;
  }

  /// Throws a config error on invalid settings; returns non-fatal warnings.
  std::vector<std::string> validate() const;
};

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Rank-sum weights: w_f = (N - r_f + 1) / sum_j (N - r_j + 1), in input order.
inline std::vector<Rational> rank_weights(std::span<const int> ordering) {
  const auto n = static_cast<std::int64_t>(ordering.size());
  if (n == 0) throw Error(ErrorCode::config, "factor ordering is empty");
  std::vector<bool> seen(ordering.size() + 1, false);
  for (int r : ordering) {
    if (r < 1 || r > n || seen[r])
      throw Error(ErrorCode::config, "factor ordering is not a permutation of 1..N", std::to_string(r));
    seen[r] = true;
  }
  const std::int64_t total = n * (n + 1) / 2;
  std::vector<Rational> w;
  w.reserve(ordering.size());
  for (int r : ordering) w.emplace_back(n - r + 1, total);
  return w;
}

struct FactorWeight {
  FactorId factor = FactorId::billing_distance;
  int rank = 1;
  Rational weight;
  bool operator==(const FactorWeight&) const = default;
};

/// Nominal weights of the enabled factors, in rank order.
inline std::vector<FactorWeight> factor_weights(const RankingConfig& cfg) {
  auto enabled = cfg.enabled();
  std::vector<int> ranks;
  for (const auto& f : enabled) ranks.push_back(f.rank);
  auto w = rank_weights(ranks);
  std::vector<FactorWeight> out;
  for (std::size_t i = 0; i < enabled.size(); ++i) out.push_back({enabled[i].factor, enabled[i].rank, w[i]});
  return out;
}

inline std::vector<std::string> RankingConfig::validate() const {
  std::set<FactorId> ids;
  for (const auto& f : factors)
    if (!ids.insert(f.factor).second) throw Error(ErrorCode::config, "factor listed twice", std::string(to_string(f.factor)));
  auto on = enabled();
  if (on.empty()) throw Error(ErrorCode::config, "at least one factor must be enabled");
  std::vector<int> ranks;
  for (const auto& f : on) ranks.push_back(f.rank);
  rank_weights(ranks);
  if (billing.near_days < 0 || billing.week_days <= billing.near_days || billing.quiet_threshold < 0)
    throw Error(ErrorCode::config, "billing thresholds must satisfy 0 <= near_days < week_days, quiet_threshold >= 0");
  if (!(periodicity.medium_min <= periodicity.high_min && periodicity.high_min <= periodicity.high_max) ||
      periodicity.medium_min < 1)
    throw Error(ErrorCode::config, "periodicity bounds must satisfy 1 <= medium_min <= high_min <= high_max");
  if (periodicity.min_events < 2 || periodicity.estimator.tolerance_days < 0 || periodicity.estimator.min_support <= 0 || periodicity.estimator.min_repeats < 1 ||
      periodicity.estimator.min_support > 1)
    throw Error(ErrorCode::config, "periodicity estimator settings out of range");
  if (working_hours.end_of_shift_minutes < 0 || working_hours.end_of_shift_minutes > 24 * 60)
    throw Error(ErrorCode::config, "end-of-shift window out of range");
  if (concentration.percent < 1 || concentration.percent > 99 ||
      concentration.high_max_employees > concentration.medium_max_employees)
    throw Error(ErrorCode::config, "employee concentration settings out of range");
  if (employee_mode.tau < Rational{0}) throw Error(ErrorCode::config, "employee threshold must be non-negative");

  std::vector<std::string> warnings;
  auto is_on = [&](FactorId id) {
    return std::any_of(on.begin(), on.end(), [&](const auto& f) { return f.factor == id; });
  };
  if (is_on(FactorId::billing_distance) && is_on(FactorId::due_distance))
    warnings.emplace_back(
        "WARNING: billing_distance and due_distance are both enabled; their windows overlap and inflate scores");
  return warnings;
}

// ---------------------------------------------------------------------------
// Factor classifiers
// ---------------------------------------------------------------------------

struct DistanceCounts {
  std::size_t near = 0;   // |D0|
  std::size_t week = 0;   // |D1|
  std::size_t quiet = 0;  // |D2|
};

inline DistanceCounts distance_counts(const EventSeries& series, unsigned day, const BillingThresholds& t) {
  DistanceCounts c;
  for (const auto& e : series.events) {
    int d = distance_to_scheduled_day(e.timestamp, day);
    if (d <= t.near_days) ++c.near;
    else if (d <= t.week_days) ++c.week;
    else ++c.quiet;
  }
  return c;
}

inline Severity classify_distance(const DistanceCounts& c, const BillingThresholds& t) {
  bool combined = t.literal_high_rule ? c.near + c.week >= 2 : (c.near >= 1 && c.near + c.week >= 2);
  if (c.near >= 2 || c.week >= 3 || combined) return Severity::high;
  if (c.near == 1 || c.week == 1 || c.week == 2 || c.quiet > static_cast<std::size_t>(t.quiet_threshold))
    return Severity::medium;
  return Severity::low;
}

inline FactorScore factor_billing_distance(const EventSeries& series, const ClientProfile& profile,
                                           const BillingThresholds& t,
                                           ScheduleTarget target = ScheduleTarget::billing) {
  const FactorId id = target == ScheduleTarget::billing ? FactorId::billing_distance : FactorId::due_distance;
  const auto& day = target == ScheduleTarget::billing ? profile.billing_day : profile.due_day;
  if (!day) return skipped_score(id, target == ScheduleTarget::billing ? "billing day missing" : "due day missing");
  auto c = distance_counts(series, *day, t);
  return make_score(id, classify_distance(c, t),
                    "|D0|=" + std::to_string(c.near) + " |D1|=" + std::to_string(c.week) +
                        " |D2|=" + std::to_string(c.quiet));
}

inline FactorScore factor_periodicity(const EventSeries& series, const PeriodicityThresholds& t) {
  if (series.size() < t.min_events)
    return make_score(FactorId::periodicity, Severity::low, "insufficient data (" + std::to_string(series.size()) + " events)");
  auto est = proper_period(series, t.estimator);
  if (!est.period_days) return make_score(FactorId::periodicity, Severity::low, "no dominant period");
  int p = *est.period_days;
  char buf[64];
  std::snprintf(buf, sizeof buf, "p=%d support=%.2f", p, *est.support);
  Severity s = Severity::low;
  if (p >= t.high_min && p <= t.high_max) s = Severity::high;
  else if (p >= t.medium_min && p < t.high_min) s = Severity::medium;
  return make_score(FactorId::periodicity, s, buf);
}

inline FactorScore factor_working_hours(const EventSeries& series, const CalendarConfig& calendar,
                                        const WorkingHoursThresholds& t) {
  std::size_t outside = 0, end = 0;
  std::set<std::string> missing;
  for (const auto& e : series.events) {
    const ShiftSchedule* s = calendar.shift(e.employee_id);
    if (!s) missing.insert(e.employee_id);
    switch (classify_time_of_day(e, s, calendar.holidays, t.end_of_shift_minutes)) {
      case TimeOfDay::outside_hours: ++outside; break;
      case TimeOfDay::end_of_shift: ++end; break;
      case TimeOfDay::in_shift: break;
    }
  }
  std::string why = "outside=" + std::to_string(outside) + " end_of_shift=" + std::to_string(end);
  if (!missing.empty()) why += " (schedule missing for " + std::to_string(missing.size()) + " employee(s))";
  Severity s = Severity::low;
  if (outside >= t.high_min_events) s = Severity::high;
  else if (end >= t.medium_min_events) s = Severity::medium;
  return make_score(FactorId::working_hours, s, std::move(why));
}

/// Size of the smallest employee set handling strictly more than `percent`
/// of the events (greedy by descending count). 0 for an empty series.
inline std::size_t covering_employee_count(const EventSeries& series, int percent) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : series.events) ++counts[e.employee_id];
  std::vector<std::size_t> sorted;
  for (const auto& [_, n] : counts) sorted.push_back(n);
  std::sort(sorted.rbegin(), sorted.rend());
  const std::size_t total = series.size();
  std::size_t cum = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cum += sorted[k];
    if (cum * 100 > static_cast<std::size_t>(percent) * total) return k + 1;
  }
  return sorted.size();
}

inline FactorScore factor_employee_concentration(const EventSeries& series, const ConcentrationThresholds& t) {
  if (series.empty()) return make_score(FactorId::employee_concentration, Severity::low, "no events");
  std::size_t k = covering_employee_count(series, t.percent);
  Severity s = Severity::low;
  if (k <= t.high_max_employees) s = Severity::high;
  else if (k <= t.medium_max_employees) s = Severity::medium;
  return make_score(FactorId::employee_concentration, s,
                    std::to_string(k) + " employee(s) handle >" + std::to_string(t.percent) + "% of " +
                        std::to_string(series.size()) + " events");
}

inline FactorScore factor_action(const EventSeries& series, const ActionRules& rules) {
  std::size_t forbidden = 0, suspicious = 0;
  for (const auto& e : series.events) {
    auto it = rules.find(e.action);
    if (it == rules.end()) continue;
    const ActionRule& r = it->second;
    if (r.severity == ActionSeverity::high) {
      if (!r.authorized || !r.authorized->contains(e.employee_id)) ++forbidden;
    } else {
      ++suspicious;
    }
  }
  Severity s = forbidden > 0 ? Severity::high : suspicious > 0 ? Severity::medium : Severity::low;
  return make_score(FactorId::action_name, s,
                    "forbidden=" + std::to_string(forbidden) + " suspicious=" + std::to_string(suspicious));
}

inline FactorScore factor_status(const ClientProfile& profile) {
  Severity s = profile.status == ClientStatus::blacklisted ? Severity::high
               : profile.status == ClientStatus::suspect   ? Severity::medium
                                                           : Severity::low;
  return make_score(FactorId::client_status, s, std::string("status=") + std::string(to_string(profile.status)));
}

/// Scores of every enabled factor, in rank order.
inline std::vector<FactorScore> evaluate_factors(const EventSeries& series, const ClientProfile& profile,
                                                 const CalendarConfig& calendar, const RankingConfig& cfg) {
  std::vector<FactorScore> out;
  for (const auto& f : cfg.enabled()) {
    switch (f.factor) {
      case FactorId::billing_distance:
        out.push_back(factor_billing_distance(series, profile, cfg.billing, ScheduleTarget::billing));
        break;
      case FactorId::due_distance:
        out.push_back(factor_billing_distance(series, profile, cfg.billing, ScheduleTarget::due));
        break;
      case FactorId::periodicity: out.push_back(factor_periodicity(series, cfg.periodicity)); break;
      case FactorId::working_hours: out.push_back(factor_working_hours(series, calendar, cfg.working_hours)); break;
      case FactorId::employee_concentration:
        out.push_back(factor_employee_concentration(series, cfg.concentration));
        break;
      case FactorId::action_name: out.push_back(factor_action(series, cfg.actions)); break;
      case FactorId::client_status: out.push_back(factor_status(profile)); break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Client and employee rankings
// ---------------------------------------------------------------------------

struct ClientRanking {
  std::string client_id;
  Rational score{0};
  std::vector<FactorScore> factor_scores;  // every enabled factor, rank order
  std::vector<FactorWeight> weights;       // effective weights, skipped factors removed

  bool operator==(const ClientRanking&) const = default;
};

/// R_c = sum a_f * w_f. Skipped factors drop out and the remaining weights
/// are rescaled to their original total.
inline ClientRanking rank_client(std::string client_id, std::vector<FactorScore> scores,
                                 std::span<const FactorWeight> weights) {
  if (scores.size() != weights.size()) throw Error(ErrorCode::internal, "factor/weight set mismatch");
  for (const auto& s : scores) {
    if (std::none_of(weights.begin(), weights.end(), [&](const auto& w) { return w.factor == s.factor; }))
      throw Error(ErrorCode::internal, "factor/weight set mismatch", std::string(to_string(s.factor)));
    if (s.performance < 0 || s.performance > 2 || severity_of(s.performance) != s.severity)
      throw Error(ErrorCode::internal, "inconsistent factor score", std::string(to_string(s.factor)));
  }
  Rational total{0}, kept{0};
  for (const auto& w : weights) {
    total += w.weight;
    auto it = std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.factor == w.factor; });
    if (!it->skipped) kept += w.weight;
  }
  ClientRanking r;
  r.client_id = std::move(client_id);
  for (const auto& w : weights) {
    auto it = std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.factor == w.factor; });
    if (it->skipped) continue;
    Rational eff = kept == Rational{0} ? Rational{0} : w.weight * total / kept;
    r.weights.push_back({w.factor, w.rank, eff});
    r.score += Rational(it->performance) * eff;
  }
  r.factor_scores = std::move(scores);
  return r;
}

/// Clients ordered by descending score, ties by ascending id.
inline bool ranking_before(const ClientRanking& a, const ClientRanking& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.client_id < b.client_id;
}

struct EmployeeRanking {
  std::string employee_id;
  Rational score{0};
  std::optional<std::string> contributing_client;
  EmployeeRankingMode mode;

  bool operator==(const EmployeeRanking& o) const {
    return employee_id == o.employee_id && score == o.score && contributing_client == o.contributing_client &&
           mode.mode == o.mode.mode && mode.tau == o.mode.tau;
  }
};

/// Scores one employee from the rankings of the clients they served.
/// max mode: highest client score (0 when none); threshold mode: number of
/// served clients scoring strictly above tau.
inline EmployeeRanking rank_employee_from(std::string employee_id, const std::set<std::string>& served,
                                          const std::map<std::string, Rational>& client_scores,
                                          const EmployeeRankingMode& mode) {
  EmployeeRanking r{std::move(employee_id), Rational{0}, std::nullopt, mode};
  Rational best{0};
  std::size_t above = 0;
  for (const auto& c : served) {
    auto it = client_scores.find(c);
    if (it == client_scores.end()) continue;
    if (!r.contributing_client || it->second > best) {
      best = it->second;
      r.contributing_client = c;
    }
    if (it->second > mode.tau) ++above;
  }
  r.score = mode.mode == EmployeeMode::max ? best : Rational(static_cast<std::int64_t>(above));
  return r;
}

inline EmployeeRanking rank_employee(const StoreSnapshot& store, const std::string& employee_id,
                                     const std::map<std::string, Rational>& client_scores,
                                     const EmployeeRankingMode& mode, const std::optional<TimeWindow>& window = {}) {
  std::set<std::string> served;
  for (const auto& e : store.by_employee(employee_id, window)) served.insert(e.client_id);
  return rank_employee_from(employee_id, served, client_scores, mode);
}

inline bool employee_before(const EmployeeRanking& a, const EmployeeRanking& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.employee_id < b.employee_id;
}

struct RankingResult {
  std::vector<ClientRanking> clients;      // ranking order
  std::vector<EmployeeRanking> employees;  // ranking order
  std::vector<FactorWeight> weights;       // nominal weights
  std::vector<std::string> warnings;
};

/// Ranks every client with at least one event in scope, then every employee
/// from those client rankings.
inline RankingResult rank_all(const StoreSnapshot& store, const std::optional<TimeWindow>& window,
                              const RankingConfig& cfg, const CalendarConfig& calendar) {
  RankingResult out;
  out.warnings = cfg.validate();
  out.weights = factor_weights(cfg);

  std::map<std::string, std::vector<Event>> by_client;
  std::map<std::string, std::set<std::string>> served;
  auto events = window ? store.by_time(*window) : std::vector<Event>(store.events().begin(), store.events().end());
  for (auto& e : events) {
    served[e.employee_id].insert(e.client_id);
    by_client[e.client_id].push_back(std::move(e));
  }
  for (auto& [client, evs] : by_client) {
    EventSeries series{client, std::move(evs)};
    auto scores = evaluate_factors(series, calendar.profile_or_default(client), calendar, cfg);
    out.clients.push_back(rank_client(client, std::move(scores), out.weights));
  }
  std::sort(out.clients.begin(), out.clients.end(), ranking_before);

  std::map<std::string, Rational> client_scores;
  for (const auto& c : out.clients) client_scores.emplace(c.client_id, c.score);
  for (const auto& [employee, clients] : served)
    out.employees.push_back(rank_employee_from(employee, clients, client_scores, cfg.employee_mode));
  std::sort(out.employees.begin(), out.employees.end(), employee_before);
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json rational_json(const Rational& r) { return {{"exact", to_string(r)}, {"value", to_double(r)}}; }

inline nlohmann::json to_json(const FactorScore& s) {
  return {{"factor", to_string(s.factor)},
          {"performance", s.performance},
          {"severity", to_string(s.severity)},
          {"explanation", s.explanation},
          {"skipped", s.skipped}};
}

inline nlohmann::json to_json(const FactorWeight& w) {
  return {{"factor", to_string(w.factor)}, {"rank", w.rank}, {"weight", rational_json(w.weight)}};
}

inline nlohmann::json to_json(const ClientRanking& r) {
  nlohmann::json scores = nlohmann::json::array(), weights = nlohmann::json::array();
  for (const auto& s : r.factor_scores) scores.push_back(to_json(s));
  for (const auto& w : r.weights) weights.push_back(to_json(w));
  return {{"client_id", r.client_id}, {"score", rational_json(r.score)}, {"factors", scores}, {"weights", weights}};
}

inline nlohmann::json to_json(const EmployeeRanking& r) {
  nlohmann::json mode = r.mode.mode == EmployeeMode::max ? nlohmann::json{{"mode", "max"}}
                                                         : nlohmann::json{{"mode", "threshold"}, {"tau", to_string(r.mode.tau)}};
  return {{"employee_id", r.employee_id},
          {"score", rational_json(r.score)},
          {"contributing_client", r.contributing_client ? nlohmann::json(*r.contributing_client) : nlohmann::json(nullptr)},
          {"mode", mode}};
}

inline nlohmann::json to_json(const RankingResult& r) {
  nlohmann::json clients = nlohmann::json::array(), employees = nlohmann::json::array(),
                 weights = nlohmann::json::array();
  for (const auto& c : r.clients) clients.push_back(to_json(c));
  for (const auto& e : r.employees) employees.push_back(to_json(e));
  for (const auto& w : r.weights) weights.push_back(to_json(w));
  return {{"clients", clients}, {"employees", employees}, {"weights", weights}, {"warnings", r.warnings}};
}

inline std::string rankings_digest(const RankingResult& r) { return hex_digest(to_json(r).dump()); }

/// Factor configuration document. Every key is optional; omitted keys keep
/// their defaults. See README for the full schema.
inline RankingConfig ranking_config_from_json(const nlohmann::json& j) {
  RankingConfig cfg = RankingConfig::defaults();
  try {
    if (j.contains("factors")) {
      cfg.factors.clear();
      for (const auto& f : j.at("factors"))
        cfg.factors.push_back({parse_factor_id(f.at("id").get<std::string>()), f.at("rank").get<int>(),
                               f.value("enabled", true)});
    }
    if (auto it = j.find("billing_distance"); it != j.end()) {
      cfg.billing.near_days = it->value("near_days", cfg.billing.near_days);
      cfg.billing.week_days = it->value("week_days", cfg.billing.week_days);
      cfg.billing.quiet_threshold = it->value("quiet_threshold", cfg.billing.quiet_threshold);
      cfg.billing.literal_high_rule = it->value("literal_high_rule", cfg.billing.literal_high_rule);
    }
    if (auto it = j.find("periodicity"); it != j.end()) {
      auto& p = cfg.periodicity;
      p.high_min = it->value("high_min", p.high_min);
      p.high_max = it->value("high_max", p.high_max);
      p.medium_min = it->value("medium_min", p.medium_min);
      p.min_events = it->value("min_events", p.min_events);
      p.estimator.tolerance_days = it->value("tolerance_days", p.estimator.tolerance_days);
      p.estimator.min_support = it->value("min_support", p.estimator.min_support);
      p.estimator.min_repeats = it->value("min_repeats", p.estimator.min_repeats);
    }
    if (auto it = j.find("working_hours"); it != j.end()) {
      auto& w = cfg.working_hours;
      if (it->contains("end_of_shift_hours"))
        w.end_of_shift_minutes = static_cast<int>(it->at("end_of_shift_hours").get<double>() * 60.0 + 0.5);
      w.end_of_shift_minutes = it->value("end_of_shift_minutes", w.end_of_shift_minutes);
      w.high_min_events = it->value("high_min_events", w.high_min_events);
      w.medium_min_events = it->value("medium_min_events", w.medium_min_events);
    }
    if (auto it = j.find("employee_concentration"); it != j.end()) {
      auto& c = cfg.concentration;
      c.percent = it->value("percent", c.percent);
      c.high_max_employees = it->value("high_max_employees", c.high_max_employees);
      c.medium_max_employees = it->value("medium_max_employees", c.medium_max_employees);
    }
    if (auto it = j.find("action_rules"); it != j.end()) {
      if (!it->is_array()) throw Error(ErrorCode::config, "action_rules must be an array");
      for (const auto& r : *it) {
        auto action = r.at("action").get<std::string>();
        auto sev = r.at("severity").get<std::string>();
        ActionRule rule;
        if (sev == "high") rule.severity = ActionSeverity::high;
        else if (sev == "medium") rule.severity = ActionSeverity::medium;
        else throw Error(ErrorCode::config, "action severity must be high or medium", action);
        if (r.contains("authorized")) rule.authorized = r.at("authorized").get<std::set<std::string>>();
        if (action.empty() || !cfg.actions.emplace(action, std::move(rule)).second)
          throw Error(ErrorCode::config, "empty or duplicate action rule", action);
      }
    }
    if (auto it = j.find("employee_mode"); it != j.end()) {
      auto mode = it->value("mode", std::string("max"));
      if (mode == "max") cfg.employee_mode.mode = EmployeeMode::max;
      else if (mode == "threshold") cfg.employee_mode.mode = EmployeeMode::threshold;
      else throw Error(ErrorCode::config, "employee mode must be max or threshold", mode);
      if (it->contains("tau")) {
        const auto& tau = it->at("tau");
        cfg.employee_mode.tau = tau.is_string() ? parse_rational(tau.get<std::string>())
                                                : parse_rational(tau.dump());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, "malformed factor configuration", e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::config, "malformed number in factor configuration", e.what());
  }
  cfg.validate();
  return cfg;
}

inline nlohmann::json to_json(const RankingConfig& cfg) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : cfg.factors)
    factors.push_back({{"id", to_string(f.factor)}, {"rank", f.rank}, {"enabled", f.enabled}});
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [action, r] : cfg.actions) {
    nlohmann::json rj{{"action", action}, {"severity", r.severity == ActionSeverity::high ? "high" : "medium"}};
    if (r.authorized) rj["authorized"] = *r.authorized;
    rules.push_back(std::move(rj));
  }
  nlohmann::json mode = cfg.employee_mode.mode == EmployeeMode::max
                            ? nlohmann::json{{"mode", "max"}}
                            : nlohmann::json{{"mode", "threshold"}, {"tau", to_string(cfg.employee_mode.tau)}};
  return {{"factors", factors},
          {"billing_distance",
           {{"near_days", cfg.billing.near_days},
            {"week_days", cfg.billing.week_days},
            {"quiet_threshold", cfg.billing.quiet_threshold},
            {"literal_high_rule", cfg.billing.literal_high_rule}}},
          {"periodicity",
           {{"high_min", cfg.periodicity.high_min},
            {"high_max", cfg.periodicity.high_max},
            {"medium_min", cfg.periodicity.medium_min},
            {"min_events", cfg.periodicity.min_events},
            {"tolerance_days", cfg.periodicity.estimator.tolerance_days},
            {"min_support", cfg.periodicity.estimator.min_support},
            {"min_repeats", cfg.periodicity.estimator.min_repeats}}},
          {"working_hours",
           {{"end_of_shift_minutes", cfg.working_hours.end_of_shift_minutes},
            {"high_min_events", cfg.working_hours.high_min_events},
            {"medium_min_events", cfg.working_hours.medium_min_events}}},
          {"employee_concentration",
           {{"percent", cfg.concentration.percent},
            {"high_max_employees", cfg.concentration.high_max_employees},
            {"medium_max_employees", cfg.concentration.medium_max_employees}}},
          {"action_rules", rules},
          {"employee_mode", mode}};
}

inline std::string config_digest(const RankingConfig& cfg) { return hex_digest(to_json(cfg).dump()); }

}  // namespace fraudscope
