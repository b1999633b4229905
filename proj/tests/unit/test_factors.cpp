#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace fstest;

namespace {

// Billing day 15 of March 2014.
EventSeries before_billing(std::vector<int> days_before) {
  std::vector<Event> evs;
  for (int d : days_before) evs.push_back({Timestamp{day("2014-03-15") - std::chrono::days{d}} + std::chrono::hours{10},
                                           "u1", "c1", "VIEW", "default"});
  return make_series("c1", std::move(evs));
}

int billing_a(const EventSeries& s, BillingThresholds t = {}) {
  return factor_billing_distance(s, profile("c1", 15u), t).performance;
}

EventSeries split(const std::vector<int>& per_employee) {
  std::vector<Event> evs;
  Date d = day("2014-01-01");
  for (std::size_t u = 0; u < per_employee.size(); ++u)
    for (int i = 0; i < per_employee[u]; ++i) {
      evs.push_back({Timestamp{d} + std::chrono::hours{10}, "u" + std::to_string(u + 1), "c1", "VIEW", "default"});
      d += std::chrono::days{1};
    }
  return make_series("c1", std::move(evs));
}

}  // namespace

TEST(BillingFactor, PaperExamples) {
  EXPECT_EQ(billing_a(before_billing({2, 1})), 2);
  EXPECT_EQ(billing_a(before_billing({5})), 1);
  EXPECT_EQ(billing_a(before_billing({8, 9, 10, 11, 12, 13})), 1);
  EXPECT_EQ(billing_a(before_billing({8, 9})), 0);
}

TEST(BillingFactor, RuleBoundaries) {
  EXPECT_EQ(billing_a(before_billing({0})), 1);          // |D0| = 1
  EXPECT_EQ(billing_a(before_billing({4, 5, 6})), 2);    // |D1| = 3
  EXPECT_EQ(billing_a(before_billing({4, 5})), 1);       // |D1| = 2
  EXPECT_EQ(billing_a(before_billing({3, 6})), 2);       // |D0| = 1 and |D0|+|D1| = 2
  EXPECT_EQ(billing_a(before_billing({8, 9, 10, 11, 12})), 0);
  BillingThresholds literal;
  literal.literal_high_rule = true;
  EXPECT_EQ(billing_a(before_billing({4, 5}), literal), 2);
}

TEST(BillingFactor, MissingDayIsSkipped) {
  auto s = factor_billing_distance(before_billing({1}), profile("c1", std::nullopt), {});
  EXPECT_TRUE(s.skipped);
  EXPECT_EQ(s.performance, 0);
  EXPECT_FALSE(s.explanation.empty());
}

TEST(PeriodicityFactor, Classes) {
  PeriodicityThresholds t;
  auto every = [](int gap) {
    std::vector<int> offs;
    for (int i = 0; i < 6; ++i) offs.push_back(i * gap);
    return series_at_offsets(offs);
  };
  EXPECT_EQ(factor_periodicity(every(28), t).severity, Severity::high);
  EXPECT_EQ(factor_periodicity(every(23), t).severity, Severity::medium);
  EXPECT_EQ(factor_periodicity(every(7), t).severity, Severity::low);
  EXPECT_EQ(factor_periodicity(series_at_offsets({0, 28}), t).severity, Severity::low);  // too few events
}

TEST(WorkingHoursFactor, PaperExamples) {
  CalendarConfig cal;
  cal.shifts["u1"] = ShiftSchedule::weekdays("u1", {9 * 60, 17 * 60});
  WorkingHoursThresholds t;
  // 2014-03-16 is a Sunday; 2014-03-11..13 are Tue..Thu.
  EXPECT_EQ(factor_working_hours(series_on("c1", {"2014-03-11T10:00", "2014-03-16T10:00"}), cal, t).severity,
            Severity::high);
  EXPECT_EQ(factor_working_hours(series_on("c1", {"2014-03-11T10:00", "2014-03-12T16:00"}), cal, t).severity,
            Severity::low);
  EXPECT_EQ(factor_working_hours(series_on("c1", {"2014-03-12T16:00", "2014-03-13T15:30"}), cal, t).severity,
            Severity::medium);
}

TEST(WorkingHoursFactor, MissingScheduleNoted) {
  CalendarConfig cal;
  auto s = factor_working_hours(series_on("c1", {"2014-03-11T03:00"}), cal, {});
  EXPECT_EQ(s.severity, Severity::low);
  EXPECT_NE(s.explanation.find("schedule missing"), std::string::npos);
}

TEST(ConcentrationFactor, PaperExamples) {
  ConcentrationThresholds t;
  EXPECT_EQ(factor_employee_concentration(split({6, 1, 1, 1, 1}), t).severity, Severity::high);
  EXPECT_EQ(factor_employee_concentration(split({3, 3, 4}), t).severity, Severity::medium);
  EXPECT_EQ(covering_employee_count(split({3, 3, 4}), 50), 2u);
  EXPECT_EQ(factor_employee_concentration(split(std::vector<int>(10, 1)), t).severity, Severity::low);
  EXPECT_EQ(covering_employee_count(split(std::vector<int>(10, 1)), 50), 6u);
  // Exactly half is not "more than half".
  EXPECT_EQ(covering_employee_count(split({5, 5}), 50), 2u);
}

TEST(ActionFactor, Rules) {
  ActionRules rules;
  rules["DELETE_INVOICE"] = {ActionSeverity::high, std::nullopt};
  rules["REFUND"] = {ActionSeverity::high, std::set<std::string>{"u1"}};
  rules["NOTE"] = {ActionSeverity::medium, std::nullopt};
  auto with = [](std::vector<std::pair<std::string, std::string>> acts) {
    std::vector<Event> evs;
    for (auto& [emp, act] : acts) evs.push_back(ev("2014-01-01T10:00", emp, "c1", act));
    return make_series("c1", std::move(evs));
  };
  EXPECT_EQ(factor_action(with({{"u1", "VIEW"}, {"u1", "DELETE_INVOICE"}}), rules).severity, Severity::high);
  EXPECT_EQ(factor_action(with({{"u1", "NOTE"}}), rules).severity, Severity::medium);
  EXPECT_EQ(factor_action(with({{"u1", "VIEW"}}), rules).severity, Severity::low);
  EXPECT_EQ(factor_action(with({{"u1", "REFUND"}}), rules).severity, Severity::low);
  EXPECT_EQ(factor_action(with({{"u2", "REFUND"}}), rules).severity, Severity::high);
}

TEST(StatusFactor, Mapping) {
  EXPECT_EQ(factor_status(profile("c", 1u, std::nullopt, ClientStatus::blacklisted)).performance, 2);
  EXPECT_EQ(factor_status(profile("c", 1u, std::nullopt, ClientStatus::suspect)).performance, 1);
  EXPECT_EQ(factor_status(profile("c", 1u, std::nullopt, ClientStatus::cleared)).performance, 0);
}

TEST(Factors, MatchBruteForceOnRandomSeries) {
  Random r(2024);
  for (int round = 0; round < 300; ++round) {
    auto c = oracle::random_case(r);
    auto scores = evaluate_factors(c.series, c.profile, c.calendar, c.config);
    ASSERT_EQ(scores.size(), c.config.enabled().size());
    for (const auto& s : scores) {
      auto want = oracle::factor(s.factor, c.series, c.profile, c.calendar, c.config);
      ASSERT_EQ(s.skipped, !want.has_value()) << to_string(s.factor) << " round " << round;
      if (want) {
        ASSERT_EQ(s.performance, *want) << to_string(s.factor) << " round " << round;
      }
      ASSERT_EQ(s.severity, severity_of(s.performance));
    }
  }
}
