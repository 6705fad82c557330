#include "seashark/config.hpp"

#include <fstream>

#include "seashark/error.hpp"
#include "seashark/json_io.hpp"

namespace seashark {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_pid(const json& j, const char* key, control::PidGains& g) {
  if (!j.contains(key)) return;
  const json& p = j.at(key);
  read(p, "kp", g.kp);
  read(p, "ki", g.ki);
  read(p, "kd", g.kd);
  read(p, "integrator_limit", g.integrator_limit);
}

json pid_json(const control::PidGains& g) {
  return json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"integrator_limit", g.integrator_limit}};
}

}  // namespace

geo::GeoPoint default_home() { return geo::GeoPoint::from_degrees(55.70, 12.60); }

void StationConfig::validate() const {
  env.validate();
  gains.validate();
  if (!(tick_dt > 0.0) || tick_dt > 1.0) throw Error(ErrorCode::InvalidParams, "tick_dt must lie in (0, 1]");
  if (!(stale_timeout > 0.0)) throw Error(ErrorCode::InvalidParams, "stale_timeout must be > 0");
  if (!(time_scale > 0.0)) throw Error(ErrorCode::InvalidParams, "time_scale must be > 0");
  if (telemetry_decimation < 1) throw Error(ErrorCode::InvalidParams, "telemetry_decimation must be >= 1");
  if (subscriber_buffer < 1) throw Error(ErrorCode::InvalidParams, "subscriber_buffer must be >= 1");
  if (!(limits.max_speed > 0.0) || !(limits.max_yaw_rate > 0.0) || !(limits.max_vr > 0.0) ||
      !(limits.speed_tau > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "vehicle limits must be > 0");
  }
  if (home.depth > env.surface_threshold) throw Error(ErrorCode::InvalidParams, "home pose must be at the surface");
}

StationConfig config_from_json(const json& j, StationConfig cfg) {
  try {
    if (j.contains("environment")) {
      const json& e = j.at("environment");
      if (e.contains("current")) {
        const json& c = e.at("current");
        read(c, "east", cfg.env.current.base.east);
        read(c, "north", cfg.env.current.base.north);
        read(c, "de_de", cfg.env.current.de_de);
        read(c, "de_dn", cfg.env.current.de_dn);
        read(c, "dn_de", cfg.env.current.dn_de);
        read(c, "dn_dn", cfg.env.current.dn_dn);
        if (c.contains("origin")) cfg.env.current.origin = io::geo_from_json(c.at("origin"));
      }
      if (e.contains("bathymetry_file")) {
        cfg.env.bathymetry = sim::Bathymetry::load(e.at("bathymetry_file").get<std::string>());
      } else if (e.contains("flat_seabed_depth")) {
        cfg.env.bathymetry = sim::Bathymetry::flat(cfg.home.position, e.value("flat_seabed_extent", 3000.0),
                                                   e.at("flat_seabed_depth").get<double>());
      }
      read(e, "compass_bias", cfg.env.compass_bias);
      read(e, "compass_noise_sigma", cfg.env.compass_noise_sigma);
      read(e, "gnss_noise_sigma", cfg.env.gnss_noise_sigma);
      read(e, "depth_noise_sigma", cfg.env.depth_noise_sigma);
      read(e, "altitude_noise_sigma", cfg.env.altitude_noise_sigma);
      read(e, "surface_threshold", cfg.env.surface_threshold);
      read(e, "altimeter_max_range", cfg.env.altimeter_max_range);
    }
    if (j.contains("home")) {
      const json& h = j.at("home");
      if (h.contains("position")) cfg.home.position = io::geo_from_json(h.at("position"));
      if (h.contains("heading")) cfg.home.heading = geo::Heading(h.at("heading").get<double>());
    }
    if (j.contains("limits")) {
      const json& l = j.at("limits");
      read(l, "max_speed", cfg.limits.max_speed);
      read(l, "max_yaw_rate", cfg.limits.max_yaw_rate);
      read(l, "max_vr", cfg.limits.max_vr);
      read(l, "speed_tau", cfg.limits.speed_tau);
    }
    if (j.contains("gains")) {
      read_pid(j.at("gains"), "heading", cfg.gains.heading);
      read_pid(j.at("gains"), "vertical", cfg.gains.vertical);
    }
    if (j.contains("executor")) {
      const json& x = j.at("executor");
      read(x, "depth_band", cfg.exec.depth_band);
      read(x, "capture_ticks", cfg.exec.capture_ticks);
      read(x, "arrival_radius", cfg.exec.arrival_radius);
      read(x, "loiter_radius", cfg.exec.loiter_radius);
      read(x, "give_up_factor", cfg.exec.give_up_factor);
      read(x, "min_give_up_time", cfg.exec.min_give_up_time);
      read(x, "dive_timeout", cfg.exec.dive_timeout);
    }
    if (j.contains("planner")) {
      read(j.at("planner"), "lead_in", cfg.planner.lead_in);
      read(j.at("planner"), "assumed_speed", cfg.planner.assumed_speed);
    }
    if (j.contains("envelope")) {
      read(j.at("envelope"), "max_depth", cfg.envelope.max_depth);
      read(j.at("envelope"), "min_altitude", cfg.envelope.min_altitude);
    }
    read(j, "tick_dt", cfg.tick_dt);
    read(j, "photo_interval", cfg.photo_interval);
    read(j, "stale_timeout", cfg.stale_timeout);
    read(j, "seed", cfg.seed);
    read(j, "field_mode", cfg.field_mode);
    if (j.contains("station")) {
      const json& s = j.at("station");
      read(s, "time_scale", cfg.time_scale);
      read(s, "telemetry_decimation", cfg.telemetry_decimation);
      read(s, "subscriber_buffer", cfg.subscriber_buffer);
      read(s, "omniscient_link", cfg.omniscient_link);
      read(s, "host", cfg.host);
      read(s, "port", cfg.port);
      read(s, "log_dir", cfg.log_dir);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  cfg.planner.max_speed = cfg.limits.max_speed;
  cfg.planner.max_yaw_rate = cfg.limits.max_yaw_rate;
  cfg.exec.tick_dt = cfg.tick_dt;
  cfg.validate();
  return cfg;
}

StationConfig load_config(const std::string& path, StationConfig base) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return config_from_json(j, std::move(base));
}

json config_to_json(const StationConfig& c) {
  json j;
  j["environment"] = {
      {"current",
       {{"east", c.env.current.base.east},
        {"north", c.env.current.base.north},
        {"de_de", c.env.current.de_de},
        {"de_dn", c.env.current.de_dn},
        {"dn_de", c.env.current.dn_de},
        {"dn_dn", c.env.current.dn_dn},
        {"origin", io::geo_to_json(c.env.current.origin)}}},
      {"compass_bias", c.env.compass_bias},
      {"compass_noise_sigma", c.env.compass_noise_sigma},
      {"gnss_noise_sigma", c.env.gnss_noise_sigma},
      {"depth_noise_sigma", c.env.depth_noise_sigma},
      {"altitude_noise_sigma", c.env.altitude_noise_sigma},
      {"surface_threshold", c.env.surface_threshold},
      {"altimeter_max_range", c.env.altimeter_max_range},
      {"bathymetry_loaded", c.env.bathymetry.has_value()}};
  j["home"] = {{"position", io::geo_to_json(c.home.position)}, {"heading", c.home.heading.degrees()}};
  j["limits"] = {{"max_speed", c.limits.max_speed},
                 {"max_yaw_rate", c.limits.max_yaw_rate},
                 {"max_vr", c.limits.max_vr},
                 {"speed_tau", c.limits.speed_tau}};
  j["gains"] = {{"heading", pid_json(c.gains.heading)}, {"vertical", pid_json(c.gains.vertical)}};
  j["executor"] = {{"depth_band", c.exec.depth_band},
                   {"capture_ticks", c.exec.capture_ticks},
                   {"arrival_radius", c.exec.arrival_radius},
                   {"loiter_radius", c.exec.loiter_radius},
                   {"give_up_factor", c.exec.give_up_factor},
                   {"min_give_up_time", c.exec.min_give_up_time},
                   {"dive_timeout", c.exec.dive_timeout}};
  j["planner"] = {{"lead_in", c.planner.lead_in}, {"assumed_speed", c.planner.assumed_speed}};
  j["envelope"] = {{"max_depth", c.envelope.max_depth}, {"min_altitude", c.envelope.min_altitude}};
  j["tick_dt"] = c.tick_dt;
  j["photo_interval"] = c.photo_interval;
  j["stale_timeout"] = c.stale_timeout;
  j["seed"] = c.seed;
  j["field_mode"] = c.field_mode;
  j["station"] = {{"time_scale", c.time_scale},
                  {"telemetry_decimation", c.telemetry_decimation},
                  {"subscriber_buffer", c.subscriber_buffer},
                  {"omniscient_link", c.omniscient_link},
                  {"host", c.host},
                  {"port", c.port},
                  {"log_dir", c.log_dir}};
  return j;
}

std::vector<std::string> scenario_names() {
  return {"calm", "drift", "shear", "eelgrass", "harbor", "ghostnet"};
}

StationConfig make_scenario(std::string_view name) {
  StationConfig cfg;
  cfg.home.position = default_home();
  cfg.env.current.origin = cfg.home.position;
  cfg.env.compass_noise_sigma = 0.5;
  cfg.env.gnss_noise_sigma = 0.5;
  cfg.env.depth_noise_sigma = 0.02;
  cfg.env.altitude_noise_sigma = 0.05;
  cfg.env.bathymetry = sim::Bathymetry::flat(cfg.home.position, 3000.0, 30.0);

  if (name == "calm") {
  } else if (name == "drift") {
    cfg.env.current = sim::CurrentField::uniform(0.2, 0.0);
  } else if (name == "shear") {
    // Eastward current growing 0.1 m/s per 100 m north of home.
    cfg.env.current.de_dn = 0.001;
  } else if (name == "eelgrass") {
    // Shore to sea: 1.5 m at the western shore line, 15 m one kilometer east.
    const int ncols = 21;
    const int nrows = 3;
    const geo::GeoPoint sw = geo::from_local(cfg.home.position, {-100.0, -1000.0});
    const geo::GeoPoint ne = geo::from_local(cfg.home.position, {900.0, 1000.0});
    std::vector<double> depths;
    for (int r = 0; r < nrows; ++r) {
      for (int c = 0; c < ncols; ++c) depths.push_back(1.5 + 13.5 * c / (ncols - 1));
    }
    cfg.env.bathymetry = sim::Bathymetry(ncols, nrows, sw.lat, sw.lon, (ne.lat - sw.lat) / (nrows - 1),
                                         (ne.lon - sw.lon) / (ncols - 1), std::move(depths));
    cfg.env.current = sim::CurrentField::uniform(0.0, 0.05);
  } else if (name == "harbor") {
    cfg.env.bathymetry = sim::Bathymetry::flat(cfg.home.position, 1000.0, 8.0);
    cfg.env.current = sim::CurrentField::uniform(0.03, -0.02);
  } else if (name == "ghostnet") {
    // A net lying north-south, crossed by a 40 m circle around home.
    cfg.env.objects.push_back({geo::from_local(cfg.home.position, {15.0, 20.0}),
                               geo::from_local(cfg.home.position, {15.0, 70.0}), 3.0});
  } else {
    throw Error(ErrorCode::InvalidParams, "unknown scenario " + std::string(name));
  }
  cfg.planner.max_speed = cfg.limits.max_speed;
  cfg.planner.max_yaw_rate = cfg.limits.max_yaw_rate;
  cfg.exec.tick_dt = cfg.tick_dt;
  return cfg;
}

}  // namespace seashark
