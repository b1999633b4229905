#include "support.hpp"

#include "fraudscope/service/http_server.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

using namespace fstest;
using namespace fraudscope::service;

namespace {

struct Running {
  HttpServer server;
  int port;
  std::thread thread;

  explicit Running(const Api& api) : server(api), port(server.bind("127.0.0.1", 0)) {
    thread = std::thread([this] { server.listen(); });
    server.wait_until_ready();
  }
  ~Running() {
    server.stop();
    thread.join();
  }
};

}  // namespace

TEST(Http, RoundTripOverSocket) {
  EventStore store;
  CalendarConfig cal;
  cal.profiles["c1"] = profile("c1", 15u);
  Session session(store, RankingConfig::defaults(), cal);
  Api api(session, std::string("tok"));
  Running srv(api);
  ASSERT_GT(srv.port, 0);

  httplib::Client client("127.0.0.1", srv.port);
  auto denied = client.Get("/api/frames");
  ASSERT_TRUE(denied);
  EXPECT_EQ(denied->status, 401);

  httplib::Headers auth{{"Authorization", "Bearer tok"}, {"X-Actor", "frank"}};
  std::string body = "timestamp,employee_id,client_id,action\n2014-03-12T10:00,u1,c1,VIEW\n2014-04-12T10:00,u1,c1,VIEW\n";
  auto posted = client.Post("/api/ingest", auth, body, "text/csv");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 200) << posted->body;
  EXPECT_EQ(session.audit_trail().back().actor, "frank");

  auto rankings = client.Get("/api/rankings/clients?window=2014-03-01,2014-03-31", auth);
  ASSERT_TRUE(rankings);
  EXPECT_EQ(rankings->status, 200);
  auto j = nlohmann::json::parse(rankings->body);
  EXPECT_EQ(j.at("clients").size(), 1u);

  auto svg = client.Get("/api/frames/0", auth);
  ASSERT_TRUE(svg);
  EXPECT_EQ(svg->get_header_value("Content-Type"), "image/svg+xml");

  auto exported = client.Get("/api/export?filter=client%20%3D%20c1", auth);
  ASSERT_TRUE(exported);
  EXPECT_EQ(exported->get_header_value("Content-Disposition"), "attachment; filename=\"events.csv\"");

  auto missing = client.Put("/api/nothing", auth, "", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}
