// fraudscope command line: ingest, rank, frames, serve, export, query,
// generate. Settings come from a JSON file given with --config or the
// FRAUDSCOPE_CONFIG environment variable (see README).

#include "fraudscope/fraudscope.hpp"
#include "fraudscope/service/http_server.hpp"
#include "fraudscope/synthetic.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace fraudscope;

namespace {

struct Settings {
  fs::path store = "fraudscope.store";
  std::optional<fs::path> state;
  RankingConfig factors = RankingConfig::defaults();
  CalendarConfig calendar;
  SchemaMap schema;
  LogFormat format = LogFormat::csv;
  render::SpiralConfig spiral;
  std::optional<std::string> token;
};

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::config, "cannot read", p.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::config, "not valid JSON", p.string());
  return j;
}

// A section may be inline or the name of a separate file.
nlohmann::json section(const nlohmann::json& j, const char* key, const fs::path& base) {
  const auto& v = j.at(key);
  if (v.is_string()) return read_json(base / v.get<std::string>());
  return v;
}

Settings load_settings(const std::string& config_path) {
  Settings s;
  std::string path = config_path;
  if (path.empty())
    if (const char* env = std::getenv("FRAUDSCOPE_CONFIG")) path = env;
  if (path.empty()) return s;

  auto j = read_json(path);
  fs::path base = fs::path(path).parent_path();
  try {
    if (j.contains("store")) s.store = base / j.at("store").get<std::string>();
    if (j.contains("state") && !j.at("state").is_null()) s.state = base / j.at("state").get<std::string>();
    if (j.contains("factors")) s.factors = ranking_config_from_json(section(j, "factors", base));
    if (j.contains("calendar")) s.calendar = calendar_from_json(section(j, "calendar", base));
    if (j.contains("schema")) s.schema = schema_map_from_json(j.at("schema"));
    if (j.contains("format")) s.format = parse_log_format(j.at("format").get<std::string>());
    if (j.contains("spiral")) {
      const auto& sp = j.at("spiral");
      s.spiral.period_days = sp.value("period_days", s.spiral.period_days);
      if (sp.contains("mode")) s.spiral.mode = render::parse_spiral_mode(sp.at("mode").get<std::string>());
      s.spiral.color_by_employee = sp.value("color_by_employee", s.spiral.color_by_employee);
    }
    if (j.contains("token") && !j.at("token").is_null()) s.token = j.at("token").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, "malformed settings file", e.what());
  }
  return s;
}

std::optional<TimeWindow> window_arg(const std::string& w) {
  if (w.empty()) return std::nullopt;
  return parse_window(w);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::trunc | std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::storage, "cannot write", p.string());
}

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraudscope: employee/client audit log ranking and visualization"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "settings file (default: $FRAUDSCOPE_CONFIG)");

  std::string input, format_name, window, out_dir, filter, out_file;
  std::size_t top = 0, offset = 0, limit = 1000;
  bool employees = false;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::uint64_t seed = synthetic::Spec{}.seed;

  auto* ingest = app.add_subcommand("ingest", "parse a log file and append it to the store");
  ingest->add_option("file", input, "log file")->required();
  ingest->add_option("--format", format_name, "csv | json-lines");

  auto* rank = app.add_subcommand("rank", "print client (or employee) rankings as JSON");
  rank->add_option("--window", window, "FROM,TO");
  rank->add_option("--top", top, "only the first N entries");
  rank->add_flag("--employees", employees, "rank employees instead of clients");

  auto* frames = app.add_subcommand("frames", "write one SVG per client plus manifest.json");
  frames->add_option("--out", out_dir, "output directory")->required();
  frames->add_option("--window", window, "FROM,TO");

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "bind address");

  auto* exp = app.add_subcommand("export", "write matching events as a log file");
  exp->add_option("--filter", filter, "query expression");
  exp->add_option("--out", out_file, "destination (default: stdout)");
  exp->add_option("--format", format_name, "csv | json-lines");

  auto* query = app.add_subcommand("query", "print matching events as JSON lines");
  query->add_option("filter", filter, "query expression");
  query->add_option("--offset", offset);
  query->add_option("--limit", limit);

  auto* gen = app.add_subcommand("generate", "write a synthetic CSV log and its calendar");
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      synthetic::Spec spec;
      spec.seed = seed;
      auto data = synthetic::generate(spec);
      fs::create_directories(out_dir);
      render::export_log(data.events, fs::path(out_dir) / "events.csv", LogFormat::csv);
      write_file(fs::path(out_dir) / "calendar.json", to_json(data.calendar).dump(2) + "\n");
      write_file(fs::path(out_dir) / "injected.json", nlohmann::json(data.injected).dump(2) + "\n");
      std::cout << nlohmann::json{{"events", data.events.size()}, {"injected", data.injected.size()}}.dump() << "\n";
      return 0;
    }

    auto settings = load_settings(config_path);
    EventStore store(settings.store);
    LogFormat format = format_name.empty() ? settings.format : parse_log_format(format_name);

    if (ingest->parsed()) {
      std::ifstream in(input);
      if (!in) throw Error(ErrorCode::ingest, "cannot read", input);
      auto parsed = parse_log(in, format, settings.schema);
      auto stored = store.store_events(parsed.events);
      parsed.report.duplicates = stored.duplicates;
      std::cout << to_json(parsed.report).dump(2) << "\n";
      return parsed.report.rejected == 0 ? 0 : 3;
    }

    if (exp->parsed() || query->parsed()) {
      auto snap = store.snapshot();
      auto q = service::parse_query(filter);
      service::QueryContext ctx{&settings.calendar, settings.factors.working_hours.end_of_shift_minutes};
      if (query->parsed()) {
        auto page = service::query_events(snap->events(), q, offset, limit, ctx);
        for (const auto& e : page.events) std::cout << event_to_json(e).dump() << "\n";
        std::cerr << page.total << " match(es)\n";
        return 0;
      }
      std::vector<Event> events;
      for (const auto& e : snap->events())
        if (service::matches(q, e, ctx)) events.push_back(e);
      if (out_file.empty()) render::write_log(std::cout, events, format, settings.schema);
      else std::cerr << render::export_log(events, out_file, format, settings.schema) << " event(s) exported\n";
      return 0;
    }

    service::SessionOptions opts;
    opts.state_file = settings.state;
    opts.spiral = settings.spiral;
    service::Session session(store, settings.factors, settings.calendar, opts);

    if (rank->parsed()) {
      auto result = session.rank_window(window_arg(window));
      nlohmann::json list = nlohmann::json::array();
      if (employees)
        for (const auto& e : result.employees) list.push_back(to_json(e));
      else
        for (const auto& c : result.clients) list.push_back(to_json(c));
      if (top > 0 && list.size() > top) list.erase(list.begin() + static_cast<std::ptrdiff_t>(top), list.end());
      for (const auto& w : result.warnings) std::cerr << w << "\n";
      std::cout << list.dump(2) << "\n";
      return 0;
    }

    if (frames->parsed()) {
      if (!window.empty()) session.set_window(window_arg(window), "cli");
      auto v = session.view();
      fs::create_directories(out_dir);
      render::SavedVisualization saved{v->manifest, {}};
      for (std::size_t i = 0; i < v->manifest.frames.size(); ++i) {
        const auto& f = v->manifest.frames[i];
        write_file(fs::path(out_dir) / f.path, service::frame_svg(*v, i));
        saved.layouts.emplace(f.client_id, service::client_layouts(*v, f.client_id));
      }
      write_file(fs::path(out_dir) / "manifest.json", render::to_json(v->manifest).dump(2) + "\n");
      render::save_visualization(saved, fs::path(out_dir) / "visualization.json");
      std::cerr << v->manifest.frames.size() << " frame(s) written to " << out_dir << "\n";
      return 0;
    }

    if (serve->parsed()) {
      service::Api api(session, settings.token);
      service::HttpServer server(api);
      int bound = server.bind(host, port);
      if (bound < 0) throw Error(ErrorCode::argument, "cannot bind", host + ":" + std::to_string(port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ":" << bound << "\n";
      server.listen();
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what();
    if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
    std::cerr << "\n";
    return e.code() == ErrorCode::argument || e.code() == ErrorCode::config || e.code() == ErrorCode::query ? 2 : 1;
  }
  return 0;
}
