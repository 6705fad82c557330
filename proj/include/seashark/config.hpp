#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seashark/autonomy.hpp"
#include "seashark/control.hpp"
#include "seashark/envsim.hpp"
#include "seashark/executor.hpp"
#include "seashark/mission_plan.hpp"

namespace seashark {

/// Everything the station reads from its configuration file.
struct StationConfig {
  sim::Environment env;
  sim::VehicleLimits limits;
  sim::VehicleState home;  // initial vehicle pose, at the surface
  control::ControllerGains gains;
  exec::ExecConfig exec;
  plan::PlannerDefaults planner;
  autonomy::SafetyEnvelope envelope;
  double tick_dt = 0.1;
  double photo_interval = 1.0;
  double stale_timeout = 5.0;
  std::uint64_t seed = 1;
  bool field_mode = false;

  double time_scale = 1.0;
  int telemetry_decimation = 1;
  int subscriber_buffer = 32;
  bool omniscient_link = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string log_dir;  // empty keeps logs in memory only

  /// Throws InvalidParams on inconsistent values.
  void validate() const;
};

/// Reads a JSON config; absent keys keep their defaults. Throws ParseError.
StationConfig config_from_json(const nlohmann::json& j, StationConfig base = {});
StationConfig load_config(const std::string& path, StationConfig base = {});
nlohmann::json config_to_json(const StationConfig& cfg);

/// Pre-canned environments: calm, drift, shear, eelgrass, harbor, ghostnet.
StationConfig make_scenario(std::string_view name);
std::vector<std::string> scenario_names();

/// Default home position used by the pre-canned scenarios.
geo::GeoPoint default_home();

}  // namespace seashark
