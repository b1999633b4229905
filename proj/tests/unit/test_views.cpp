#include "support.hpp"

#include <gtest/gtest.h>

using namespace fstest;
using namespace fraudscope::render;

namespace {

ClientRanking ranked(const std::string& id, std::vector<int> a) {
  std::vector<int> ranks(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ranks[i] = static_cast<int>(i) + 1;
  auto w = rank_weights(ranks);
  std::vector<FactorScore> scores;
  std::vector<FactorWeight> weights;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scores.push_back(make_score(kAllFactors[i], severity_of(a[i]), ""));
    weights.push_back({kAllFactors[i], ranks[i], w[i]});
  }
  return rank_client(id, scores, weights);
}

}  // namespace

TEST(Layered, EdgesThickenWithCount) {
  std::vector<Event> evs{ev("2014-01-01T10:00", "u1", "c1"), ev("2014-01-02T10:00", "u1", "c1"),
                         ev("2014-01-03T10:00", "u1", "c1"), ev("2014-01-04T10:00", "u2", "c1")};
  auto l = layered_layout(evs, {});
  ASSERT_EQ(l.edges.size(), 2u);
  EXPECT_EQ(l.edges[0].count, 3u);
  EXPECT_GT(l.edges[0].thickness, l.edges[1].thickness);
}

TEST(Layered, ClientFilter) {
  std::vector<Event> evs{ev("2014-01-01T10:00", "u1", "c1"), ev("2014-01-02T10:00", "u2", "c2"),
                         ev("2014-01-03T10:00", "u3", "c1")};
  auto l = layered_layout(evs, {}, std::string("c1"));
  ASSERT_EQ(l.clients.size(), 1u);
  EXPECT_EQ(l.clients[0].id, "c1");
  ASSERT_EQ(l.employees.size(), 2u);
  EXPECT_EQ(l.employees[0].id, "u1");
  EXPECT_EQ(l.employees[1].id, "u3");
}

TEST(Layered, ClientOrderMatchesRankAll) {
  Random r(4);
  std::vector<Event> evs;
  for (int i = 0; i < 300; ++i) evs.push_back(random_event(r, 12, 4));
  EventStore store;
  store.store_events(evs);
  CalendarConfig cal;
  for (int c = 1; c <= 12; ++c)
    cal.profiles["c" + std::to_string(c)] =
        profile("c" + std::to_string(c), static_cast<unsigned>(r.between(1, 28)), std::nullopt,
                static_cast<ClientStatus>(r.between(0, 2)));
  auto res = rank_all(*store.snapshot(), std::nullopt, RankingConfig::defaults(), cal);
  auto l = layered_layout(store.snapshot()->events(), res.clients);
  ASSERT_EQ(l.clients.size(), res.clients.size());
  for (std::size_t i = 0; i < l.clients.size(); ++i) {
    EXPECT_EQ(l.clients[i].id, res.clients[i].client_id);
    if (i > 0) {
      EXPECT_GT(l.clients[i].x, l.clients[i - 1].x);
    }
  }
}

TEST(Timeline, BandsBoxesAndRestDays) {
  CalendarConfig cal;
  cal.shifts["u1"] = ShiftSchedule::weekdays("u1", {9 * 60, 17 * 60});
  auto single = timeline_layout(series_on("c1", {"2014-03-11T10:00"}), cal);
  ASSERT_EQ(single.days.size(), 1u);
  ASSERT_EQ(single.days[0].nodes.size(), 1u);
  EXPECT_EQ(single.days[0].nodes[0].band, TimeOfDay::in_shift);
  EXPECT_FALSE(single.days[0].boxed);

  auto two = timeline_layout(series_on("c1", {"2014-03-11T10:00", "2014-03-11T16:30"}), cal);
  ASSERT_EQ(two.days.size(), 1u);
  EXPECT_EQ(two.days[0].nodes.size(), 2u);
  EXPECT_TRUE(two.days[0].boxed);
  EXPECT_EQ(two.days[0].nodes[1].band, TimeOfDay::end_of_shift);
  EXPECT_EQ(two.edges.size(), 1u);

  auto sat = timeline_layout(series_on("c1", {"2014-03-15T10:00"}), cal);
  EXPECT_TRUE(sat.days[0].rest_day);
  EXPECT_EQ(sat.days[0].nodes[0].band, TimeOfDay::outside_hours);
}

TEST(Timeline, NoDedup) {
  auto t = timeline_layout(series_on("c1", {"2014-03-11T10:00", "2014-03-11T11:00", "2014-03-12T10:00"}), {});
  std::size_t n = 0;
  for (const auto& d : t.days) n += d.nodes.size();
  EXPECT_EQ(n, 3u);
  EXPECT_LT(t.days[0].x, t.days[1].x);
}

TEST(StackedBar, FigureSixClient) {
  auto r = ranked("c1", {2, 0, 2, 2, 0});
  auto data = stacked_bar(std::vector<ClientRanking>{r});
  ASSERT_EQ(data.bars.size(), 1u);
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < data.bars[0].segments.size(); ++i)
    if (data.bars[0].segments[i].length != Rational(0)) nonzero.push_back(i + 1);
  EXPECT_EQ(nonzero, (std::vector<std::size_t>{1, 3, 4}));
  // 2*(5+3+2)/15
  EXPECT_EQ(data.bars[0].total, Rational(4, 3));
}

TEST(StackedBar, ZeroClientAndTopK) {
  std::vector<ClientRanking> rs{ranked("a", {0, 0, 0}), ranked("b", {2, 1, 0}), ranked("c", {1, 1, 1})};
  auto data = stacked_bar(rs, 2);
  ASSERT_EQ(data.bars.size(), 2u);
  EXPECT_EQ(data.bars[0].client_id, "b");
  EXPECT_EQ(stacked_bar(rs).bars.back().total, Rational(0));
}

TEST(StackedBar, LengthEqualsScoreExactly) {
  Random r(19);
  for (int round = 0; round < 200; ++round) {
    int n = r.between(1, 7);
    std::vector<int> a;
    for (int i = 0; i < n; ++i) a.push_back(r.between(0, 2));
    auto rk = ranked("c", a);
    Rational want{0};
    for (int i = 0; i < n; ++i) want += Rational(a[i] * (n - i), n * (n + 1) / 2);
    auto bar = stacked_bar(std::vector<ClientRanking>{rk}).bars.at(0);
    ASSERT_EQ(bar.total, want);
    ASSERT_EQ(bar.total, rk.score);
  }
}

TEST(Filters, OutsideHours) {
  CalendarConfig cal;
  cal.shifts["u1"] = ShiftSchedule::weekdays("u1", {9 * 60, 17 * 60});
  auto s = series_on("c1", {"2014-03-11T10:00", "2014-03-11T20:00", "2014-03-15T10:00", "2014-03-11T16:00"});
  FilterSet f;
  f.time_classes = std::set<TimeOfDay>{TimeOfDay::outside_hours};
  auto out = apply_filters(s.events, f, {&cal, 120, {}});
  ASSERT_EQ(out.size(), 2u);
  for (const auto& e : out)
    EXPECT_EQ(classify_time_of_day(e, cal.shift(e.employee_id), cal.holidays), TimeOfDay::outside_hours);
}

TEST(Filters, MinCountMatchesGroupAndCount) {
  Random r(23);
  std::vector<Event> evs;
  for (int i = 0; i < 60; ++i) evs.push_back(random_event(r, 80, 3));
  auto out = apply_filters(evs, unfiltered_view_filter());
  std::map<std::string, int> count;
  for (const auto& e : evs) ++count[e.client_id];
  std::vector<Event> want;
  for (const auto& e : evs)
    if (count[e.client_id] >= 2) want.push_back(e);
  EXPECT_EQ(out, want);
  EXPECT_LT(out.size(), evs.size());
}

TEST(Filters, EmptySetIsIdentityAndConjunction) {
  Random r(29);
  std::vector<Event> evs;
  for (int i = 0; i < 100; ++i) evs.push_back(random_event(r));
  EXPECT_EQ(apply_filters(evs, {}), evs);

  FilterSet f;
  f.actions = std::set<std::string>{"REFUND", "NOTE"};
  f.employees = std::set<std::string>{"u1"};
  f.window = parse_window("2014-03-01,2014-09-30");
  std::vector<Event> want;
  for (const auto& e : evs)
    if ((e.action == "REFUND" || e.action == "NOTE") && e.employee_id == "u1" && f.window->contains(e.timestamp))
      want.push_back(e);
  EXPECT_EQ(apply_filters(evs, f), want);
}

TEST(Filters, FactorPredicateUsesRankings) {
  std::vector<Event> evs{ev("2014-01-01T10:00", "u1", "c1"), ev("2014-01-01T10:00", "u1", "c2")};
  std::vector<ClientRanking> rs{ranked("c1", {2}), ranked("c2", {1})};
  FilterSet f;
  f.factor = FactorPredicate{kAllFactors[0], Severity::high};
  FilterContext ctx;
  ctx.rankings = rs;
  auto out = apply_filters(evs, f, ctx);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].client_id, "c1");
  EXPECT_THROW(apply_filters(evs, f), Error);
}
