// seashark-station: hosts the simulated vehicle and its control-station service.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "seashark/config.hpp"
#include "seashark/error.hpp"
#include "seashark/http_frontend.hpp"
#include "seashark/station.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::out | std::ios::trunc);
  if (!f) throw seashark::Error(seashark::ErrorCode::ParseError, "cannot write " + path.string());
  f << text;
}

int run_headless(seashark::station::Station& station, const std::string& plan_path, const std::string& out_dir,
                 double max_time) {
  using namespace seashark::station;
  std::ifstream in(plan_path);
  if (!in) {
    fmt::print(stderr, "cannot open plan {}\n", plan_path);
    return 2;
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fmt::print(stderr, "plan {}: {}\n", plan_path, e.what());
    return 2;
  }

  const Ack created = station.execute({CommandKind::CreatePlan, "", "", doc});
  if (!created.ok) {
    fmt::print(stderr, "plan rejected: {} {}\n", created.code, created.message);
    return 2;
  }
  const std::string plan_id = created.result.at("plan_id").get<std::string>();
  const Ack launched = station.execute({CommandKind::Launch, "", "", json{{"plan_id", plan_id}}});
  if (!launched.ok) {
    fmt::print(stderr, "launch failed: {} {}\n{}\n", launched.code, launched.message, launched.result.dump(2));
    return 3;
  }
  const std::string mission_id = launched.result.at("mission_id").get<std::string>();
  auto log = station.mission_log(mission_id);
  auto finished = [&] { return log->read([](const seashark::mlog::MissionLog& l) { return l.finalized(); }); };
  while (!finished() && station.sim_time() < max_time && !g_stop) station.step();

  const auto summary = station.list_missions().back();
  fmt::print("mission {} ({}) ended in {} after {:.1f} s, {} records\n", mission_id, summary.type, summary.phase,
             station.sim_time(), summary.records);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_file(dir / (mission_id + ".log"), station.get_log(mission_id));
    if (finished()) {
      write_file(dir / (mission_id + "_track.txt"),
                 station.export_mission(mission_id, seashark::mlog::ExportFormat::Track));
      write_file(dir / (mission_id + ".kml"),
                 station.export_mission(mission_id, seashark::mlog::ExportFormat::GeoTrack));
    }
    fmt::print("wrote log and exports to {}\n", out_dir);
  }
  return finished() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SeaShark control station with a simulated vehicle"};
  std::string config_path;
  std::string scenario = "calm";
  double time_scale = 0.0;
  bool headless = false;
  std::string plan_path;
  std::string out_dir;
  std::string host;
  int port = -1;
  double max_time = 7200.0;
  bool list = false;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON configuration file applied on top of the scenario");
  app.add_option("--scenario", scenario, "Pre-canned environment")
      ->check(CLI::IsMember(seashark::scenario_names()));
  app.add_option("--time-scale", time_scale, "Simulation speed relative to real time")->check(CLI::PositiveNumber);
  app.add_flag("--headless", headless, "Run --plan to completion without the HTTP service");
  app.add_option("--plan", plan_path, "Plan document for --headless");
  app.add_option("--out-dir", out_dir, "Where --headless writes the log and exports");
  app.add_option("--host", host, "HTTP bind address");
  app.add_option("--port", port, "HTTP port (0 picks a free one)");
  app.add_option("--max-time", max_time, "Simulated-time bound for --headless, seconds");
  app.add_flag("--list-scenarios", list, "Print scenario names and exit");
  app.add_flag("--print-config", print_config, "Print the effective configuration as JSON and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& s : seashark::scenario_names()) fmt::print("{}\n", s);
    return 0;
  }

  try {
    seashark::StationConfig cfg = seashark::make_scenario(scenario);
    if (!config_path.empty()) cfg = seashark::load_config(config_path, cfg);
    if (time_scale > 0.0) cfg.time_scale = time_scale;
    if (!host.empty()) cfg.host = host;
    if (port >= 0) cfg.port = port;
    cfg.validate();
    if (print_config) {
      fmt::print("{}\n", seashark::config_to_json(cfg).dump(2));
      return 0;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    seashark::station::Station station(cfg);
    if (headless) {
      if (plan_path.empty()) {
        fmt::print(stderr, "--headless needs --plan\n");
        return 2;
      }
      return run_headless(station, plan_path, out_dir, max_time);
    }

    seashark::station::HttpFrontend http(station);
    const int bound = http.start(cfg.host, cfg.port);
    station.start();
    fmt::print("seashark station on http://{}:{} (scenario {}, time scale {})\n", cfg.host, bound, scenario,
               cfg.time_scale);
    std::fflush(stdout);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    http.stop();
    station.stop();
  } catch (const seashark::Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", seashark::to_string(e.code()), e.what());
    return 2;
  }
  return 0;
}
