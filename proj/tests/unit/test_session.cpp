#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace fstest;
using namespace fraudscope::service;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / "fraudscope_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string csv_of(const std::vector<Event>& evs) {
  std::ostringstream out;
  render::write_log(out, evs, LogFormat::csv);
  return out.str();
}

IngestOutcome ingest(Session& s, const std::vector<Event>& evs) {
  std::istringstream in(csv_of(evs));
  return s.ingest_batch(in, LogFormat::csv);
}

CalendarConfig base_calendar() {
  CalendarConfig cal;
  for (int c = 1; c <= 6; ++c) cal.profiles["c" + std::to_string(c)] = profile("c" + std::to_string(c), 20u);
  return cal;
}

// A few scattered background events for six clients.
std::vector<Event> background() {
  std::vector<Event> evs;
  for (int c = 1; c <= 6; ++c)
    for (int m = 1; m <= 3; ++m) {
      char when[32];
      std::snprintf(when, sizeof when, "2014-%02d-%02dT10:00", m * 3, 2 + c);
      evs.push_back(ev(when, "u" + std::to_string(c), "c" + std::to_string(c)));
    }
  return evs;
}

std::size_t position(const SessionView& v, const std::string& client) {
  for (std::size_t i = 0; i < v.manifest.frames.size(); ++i)
    if (v.manifest.frames[i].client_id == client) return i;
  return v.manifest.frames.size();
}

}  // namespace

TEST(Session, IngestRaisesPeriodicClient) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto before = s.view();
  Rational old_score = before->ranking("c6")->score;
  std::size_t old_pos = position(*before, "c6");

  std::vector<Event> pattern;
  for (int k = 0; k < 6; ++k)
    pattern.push_back({Timestamp{day("2014-01-18") + std::chrono::days{28 * k}} + std::chrono::hours{11}, "u9", "c6",
                       "VIEW", "default"});
  auto out = ingest(s, pattern);
  EXPECT_EQ(out.report.accepted, 6u);
  auto after = s.view();

  // Engine oracle: rank the union directly.
  EventStore oracle;
  oracle.store_events(background());
  oracle.store_events(pattern);
  auto want = rank_all(*oracle.snapshot(), std::nullopt, RankingConfig::defaults(), base_calendar());
  EXPECT_EQ(after->rankings.clients, want.clients);
  EXPECT_GT(after->ranking("c6")->score, old_score);
  EXPECT_LT(position(*after, "c6"), old_pos);
  EXPECT_EQ(out.manifest_digest, after->manifest_digest);
  EXPECT_EQ(out.top.front(), after->manifest.frames.front().client_id);
}

TEST(Session, EmptyAndDuplicateBatchesChangeNothing) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto digest = s.view()->manifest_digest;
  auto audit = s.audit_trail().size();

  auto empty = ingest(s, {});
  EXPECT_EQ(empty.report.accepted, 0u);
  EXPECT_EQ(s.view()->manifest_digest, digest);

  auto dup = ingest(s, background());
  EXPECT_EQ(dup.report.duplicates, background().size());
  EXPECT_EQ(s.view()->manifest_digest, digest);
  EXPECT_EQ(s.audit_trail().size(), audit);
}

TEST(Session, MalformedBatchRejectedAtomically) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto before = s.view();
  std::istringstream bad(csv_of({ev("2014-05-01T10:00", "u1", "c1")}) + "not-a-time,u1,c1,VIEW,default\n");
  try {
    s.ingest_batch(bad, LogFormat::csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ingest);
  }
  EXPECT_EQ(s.view(), before);
  EXPECT_EQ(store.snapshot()->size(), background().size());
}

TEST(Session, StatusChangeAndIdempotence) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto a0 = s.view()->ranking("c2")->factor_scores;
  auto status_a = [](const std::vector<FactorScore>& fs) {
    for (const auto& f : fs)
      if (f.factor == FactorId::client_status) return f.performance;
    return -1;
  };
  EXPECT_EQ(status_a(a0), 0);

  auto n0 = s.audit_trail().size();
  auto r1 = s.set_client_status("c2", ClientStatus::blacklisted, "alice");
  EXPECT_EQ(status_a(r1.factor_scores), 2);
  auto r2 = s.set_client_status("c2", ClientStatus::blacklisted, "alice");
  EXPECT_EQ(r1.score, r2.score);
  auto trail = s.audit_trail();
  EXPECT_EQ(trail.size(), n0 + 2);
  EXPECT_EQ(trail.back().actor, "alice");
  EXPECT_EQ(trail.back().what, "status");

  EXPECT_THROW(s.set_client_status("nobody", ClientStatus::suspect, "alice"), Error);
}

TEST(Session, StatusChangeMovesEmployeeMax) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  ingest(s, {ev("2014-04-01T10:00", "u1", "c4")});  // u1 serves c1 and c4
  s.set_client_status("c4", ClientStatus::blacklisted, "alice");
  auto v = s.view();
  const EmployeeRanking* u1 = nullptr;
  for (const auto& e : v->rankings.employees)
    if (e.employee_id == "u1") u1 = &e;
  ASSERT_TRUE(u1);
  EXPECT_EQ(u1->contributing_client, "c4");
  EXPECT_EQ(u1->score, std::max(v->ranking("c1")->score, v->ranking("c4")->score));
}

TEST(Session, ConfigChangeAltersDigests) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto before = s.view();
  auto cfg = RankingConfig::defaults();
  std::swap(cfg.factors[0].rank, cfg.factors[5].rank);
  s.set_config(cfg, "bob");
  EXPECT_NE(s.view()->config_digest, before->config_digest);
  EXPECT_NE(s.view()->manifest_digest, before->manifest_digest);
  auto bad = cfg;
  bad.factors[0].rank = 9;
  EXPECT_THROW(s.set_config(bad, "bob"), Error);
  EXPECT_EQ(to_json(s.view()->config), to_json(cfg));
}

TEST(Session, FrameOverrideAndWindow) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto last = s.view()->manifest.frames.back().client_id;
  s.set_frame_order({last}, "carol");
  EXPECT_EQ(s.view()->manifest.frames.front().client_id, last);
  EXPECT_TRUE(s.view()->manifest.frames.front().pinned);

  s.set_window(parse_window("2014-03-01,2014-03-31"), "carol");
  auto v = s.view();
  EXPECT_EQ(v->rankings.clients.size(), 6u);
  ASSERT_TRUE(v->manifest.window);
  EXPECT_EQ(format_window(*v->manifest.window), "2014-03-01T00:00,2014-03-31T23:59");
  s.set_window(parse_window("2015-01-01,2015-01-31"), "carol");
  EXPECT_TRUE(s.view()->manifest.frames.empty());
}

TEST(Session, LayoutsAndFrames) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto v = s.view();
  auto j = client_layouts(*v, "c3");
  for (const char* key : {"spiral", "timeline", "least_squares", "period"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_THROW(client_layouts(*v, "zz"), Error);
  auto svg = frame_svg(*v, 0);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_EQ(svg, frame_svg(*v, 0));
  EXPECT_THROW(frame_svg(*v, 99), Error);
  EXPECT_EQ(v->manifest.frames[0].layout_digests.count("spiral"), 1u);
}

TEST(Session, StatePersistsAcrossRestart) {
  auto dir = fresh_dir("session_state");
  auto cfg = RankingConfig::defaults();
  cfg.billing.quiet_threshold = 3;
  {
    EventStore store(dir / "store.jsonl");
    SessionOptions opts;
    opts.state_file = dir / "state.json";
    Session s(store, RankingConfig::defaults(), base_calendar(), opts);
    ingest(s, background());
    s.set_config(cfg, "dave");
    s.set_client_status("c5", ClientStatus::suspect, "dave");
    s.set_window(parse_window("2014-01-01,2014-12-31"), "dave");
  }
  EventStore store(dir / "store.jsonl");
  SessionOptions opts;
  opts.state_file = dir / "state.json";
  Session s(store, RankingConfig::defaults(), base_calendar(), opts);
  auto v = s.view();
  EXPECT_EQ(v->config.billing.quiet_threshold, 3);
  EXPECT_EQ(v->calendar.profile("c5")->status, ClientStatus::suspect);
  EXPECT_TRUE(v->window);
  EXPECT_EQ(s.audit_trail().size(), 4u);
  EXPECT_EQ(s.audit_trail().front().what, "ingest");
}

TEST(Session, RankWindowDoesNotChangeState) {
  EventStore store;
  Session s(store, RankingConfig::defaults(), base_calendar());
  ingest(s, background());
  auto digest = s.view()->rankings_digest;
  auto r = s.rank_window(parse_window("2014-06-01,2014-06-30"));
  EXPECT_EQ(r.clients.size(), 6u);
  EXPECT_EQ(s.view()->rankings_digest, digest);
}
