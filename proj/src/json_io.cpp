#include "seashark/json_io.hpp"

#include "seashark/error.hpp"

namespace seashark::io {

using plan::CircleMission;
using plan::DepthMode;
using plan::DepthRef;
using plan::LineMission;
using plan::SiteMission;

namespace {

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

json line_to_json(const LineMission& m) {
  json j;
  j["start"] = geo_to_json(m.start);
  j["heading"] = m.heading.degrees();
  j["timeout"] = m.timeout;
  j["depth_ref"] = depth_ref_to_json(m.depth_ref);
  j["rendezvous"] = geo_to_json(m.rendezvous);
  j["lead_in"] = m.lead_in;
  j["assumed_speed"] = m.assumed_speed;
  return j;
}

LineMission line_from_json(const json& j) {
  LineMission m;
  m.start = geo_from_json(j.at("start"));
  m.heading = geo::Heading(j.at("heading").get<double>());
  m.timeout = j.at("timeout").get<double>();
  m.depth_ref = depth_ref_from_json(j.at("depth_ref"));
  m.rendezvous = j.contains("rendezvous") ? geo_from_json(j.at("rendezvous")) : m.start;
  m.lead_in = j.value("lead_in", 0.0);
  m.assumed_speed = j.value("assumed_speed", 1.0);
  return m;
}

}  // namespace

json geo_to_json(const geo::GeoPoint& p) { return json::array({p.lat, p.lon}); }

geo::GeoPoint geo_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "position must be [lat, lon]");
    return geo::GeoPoint::from_degrees(j[0].get<double>(), j[1].get<double>());
  });
}

json depth_ref_to_json(const DepthRef& r) {
  return json{{"mode", r.mode == DepthMode::Depth ? "depth" : "altitude"}, {"value", r.value}};
}

DepthRef depth_ref_from_json(const json& j) {
  return guarded([&] {
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "depth" && mode != "altitude") throw Error(ErrorCode::ParseError, "depth_ref mode " + mode);
    return DepthRef{mode == "depth" ? DepthMode::Depth : DepthMode::Altitude, j.at("value").get<double>()};
  });
}

json plan_to_json(const plan::MissionPlan& p) {
  json j;
  j["type"] = std::string(plan::type_name(p));
  if (const auto* l = std::get_if<LineMission>(&p)) {
    j["line"] = line_to_json(*l);
  } else if (const auto* s = std::get_if<SiteMission>(&p)) {
    json site;
    site["center"] = geo_to_json(s->center);
    site["num_lines"] = s->num_lines;
    site["line_length"] = s->line_length;
    site["spacing"] = s->spacing;
    site["orientation"] = s->orientation.degrees();
    site["depth_ref"] = depth_ref_to_json(s->depth_ref);
    site["assumed_speed"] = s->assumed_speed;
    site["lead_in"] = s->lead_in;
    json lines = json::array();
    for (const auto& l : s->lines) lines.push_back(line_to_json(l));
    site["lines"] = std::move(lines);
    j["site"] = std::move(site);
  } else {
    const auto& c = std::get<CircleMission>(p);
    json circle;
    circle["center"] = geo_to_json(c.center);
    circle["radius"] = c.radius;
    circle["speed"] = c.speed;
    circle["depth_ref"] = depth_ref_to_json(c.depth_ref);
    circle["spiral_rate"] = c.spiral_rate;
    circle["duration"] = c.duration;
    circle["direction"] = c.direction == plan::Direction::CW ? "cw" : "ccw";
    j["circle"] = std::move(circle);
  }
  return j;
}

plan::MissionPlan plan_from_json(const json& j) {
  return guarded([&]() -> plan::MissionPlan {
    const auto type = j.at("type").get<std::string>();
    if (type == "line") return line_from_json(j.at("line"));
    if (type == "site") {
      const json& s = j.at("site");
      plan::PlannerDefaults d;
      d.assumed_speed = s.value("assumed_speed", 1.0);
      d.lead_in = s.value("lead_in", 10.0);
      const auto center = geo_from_json(s.at("center"));
      const int n = s.at("num_lines").get<int>();
      const double length = s.at("line_length").get<double>();
      const double spacing = s.at("spacing").get<double>();
      const geo::Heading orientation(s.at("orientation").get<double>());
      const DepthRef ref = depth_ref_from_json(s.at("depth_ref"));
      if (s.contains("lines")) {
        SiteMission site;
        site.center = center;
        site.num_lines = n;
        site.line_length = length;
        site.spacing = spacing;
        site.orientation = orientation;
        site.depth_ref = ref;
        site.assumed_speed = d.assumed_speed;
        site.lead_in = d.lead_in;
        for (const auto& l : s.at("lines")) site.lines.push_back(line_from_json(l));
        return site;
      }
      try {
        return plan::plan_site(center, n, length, spacing, orientation, ref, d);
      } catch (const Error&) {
        // Keep invalid parameters so validation can report them.
        SiteMission site;
        site.center = center;
        site.num_lines = n;
        site.line_length = length;
        site.spacing = spacing;
        site.orientation = orientation;
        site.depth_ref = ref;
        site.assumed_speed = d.assumed_speed;
        site.lead_in = d.lead_in;
        return site;
      }
    }
    if (type == "circle") {
      const json& c = j.at("circle");
      CircleMission m;
      m.center = geo_from_json(c.at("center"));
      m.radius = c.at("radius").get<double>();
      m.speed = c.at("speed").get<double>();
      m.depth_ref = depth_ref_from_json(c.at("depth_ref"));
      m.spiral_rate = c.value("spiral_rate", 0.0);
      m.duration = c.at("duration").get<double>();
      const auto dir = c.value("direction", std::string("cw"));
      if (dir != "cw" && dir != "ccw") throw Error(ErrorCode::ParseError, "direction must be cw or ccw");
      m.direction = dir == "cw" ? plan::Direction::CW : plan::Direction::CCW;
      return m;
    }
    throw Error(ErrorCode::ParseError, "unknown mission type " + type);
  });
}

json state_to_json(const sim::VehicleState& s) {
  return json{{"position", geo_to_json(s.position)}, {"depth", s.depth},
              {"heading", s.heading.degrees()},    {"speed", s.speed},
              {"vertical_rate", s.vertical_rate},  {"sim_time", s.sim_time}};
}

sim::VehicleState state_from_json(const json& j) {
  return guarded([&] {
    sim::VehicleState s;
    s.position = geo_from_json(j.at("position"));
    s.depth = j.at("depth").get<double>();
    s.heading = geo::Heading(j.at("heading").get<double>());
    s.speed = j.at("speed").get<double>();
    s.vertical_rate = j.at("vertical_rate").get<double>();
    s.sim_time = j.at("sim_time").get<double>();
    return s;
  });
}

json frame_to_json(const sim::SensorFrame& f) {
  json j;
  j["sim_time"] = f.sim_time;
  j["compass"] = f.compass.degrees();
  j["depth"] = f.depth;
  j["altitude"] = f.altitude ? json(*f.altitude) : json(nullptr);
  j["gnss"] = f.gnss ? geo_to_json(*f.gnss) : json(nullptr);
  j["image_ref"] = f.image_ref ? json(*f.image_ref) : json(nullptr);
  j["object_seen"] = f.object_seen;
  return j;
}

sim::SensorFrame frame_from_json(const json& j) {
  return guarded([&] {
    sim::SensorFrame f;
    f.sim_time = j.at("sim_time").get<double>();
    f.compass = geo::Heading(j.at("compass").get<double>());
    f.depth = j.at("depth").get<double>();
    if (!j.at("altitude").is_null()) f.altitude = j.at("altitude").get<double>();
    if (!j.at("gnss").is_null()) f.gnss = geo_from_json(j.at("gnss"));
    if (!j.at("image_ref").is_null()) f.image_ref = j.at("image_ref").get<std::string>();
    f.object_seen = j.value("object_seen", false);
    return f;
  });
}

json ref_to_json(const control::NavReference& r) {
  return json{{"heading", r.heading.degrees()},
              {"depth_ref", depth_ref_to_json(r.depth_ref)},
              {"source", r.source == control::RefSource::Mission ? "mission" : "backseat"},
              {"issued_at", r.issued_at}};
}

control::NavReference ref_from_json(const json& j) {
  return guarded([&] {
    control::NavReference r;
    r.heading = geo::Heading(j.at("heading").get<double>());
    r.depth_ref = depth_ref_from_json(j.at("depth_ref"));
    const auto src = j.at("source").get<std::string>();
    if (src != "mission" && src != "backseat") throw Error(ErrorCode::ParseError, "ref source " + src);
    r.source = src == "mission" ? control::RefSource::Mission : control::RefSource::Backseat;
    r.issued_at = j.at("issued_at").get<double>();
    return r;
  });
}

json nav_to_json(const nav::NavEstimate& e) {
  return json{{"sim_time", e.sim_time},
              {"position", geo_to_json(e.position)},
              {"source", std::string(nav::to_string(e.source))},
              {"heading_used", e.heading_used.degrees()},
              {"speed_used", e.speed_used}};
}

nav::NavEstimate nav_from_json(const json& j) {
  return guarded([&] {
    nav::NavEstimate e;
    e.sim_time = j.at("sim_time").get<double>();
    e.position = geo_from_json(j.at("position"));
    e.source = nav::nav_source_from_string(j.at("source").get<std::string>());
    e.heading_used = geo::Heading(j.at("heading_used").get<double>());
    e.speed_used = j.at("speed_used").get<double>();
    return e;
  });
}

json violations_to_json(const std::vector<plan::Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(json{{"field", x.field}, {"message", x.message}});
  return arr;
}

}  // namespace seashark::io
