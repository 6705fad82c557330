#include "seashark/mission_plan.hpp"

#include <cmath>

#include "seashark/error.hpp"
#include "seashark/json_io.hpp"

namespace seashark::plan {

using geo::LocalOffset;

double CircleMission::feedforward_yaw_rate() const {
  const double rate = geo::rad2deg(speed / radius);
  return direction == Direction::CW ? rate : -rate;
}

LineMission plan_line(const GeoPoint& start, Heading heading, double timeout, const DepthRef& depth_ref,
                      std::optional<GeoPoint> rendezvous, double assumed_speed) {
  if (!(timeout > 0.0)) throw Error(ErrorCode::InvalidTimeout, "line timeout must be > 0");
  LineMission m;
  m.start = start;
  m.heading = heading;
  m.timeout = timeout;
  m.depth_ref = depth_ref;
  m.rendezvous = rendezvous.value_or(start);
  m.lead_in = 0.0;
  m.assumed_speed = assumed_speed;
  return m;
}

SiteMission plan_site(const GeoPoint& center, int num_lines, double line_length, double spacing,
                      Heading orientation, const DepthRef& depth_ref, const PlannerDefaults& defaults) {
  if (num_lines < 1 || !(line_length > 0.0) || !(spacing > 0.0) || !(defaults.assumed_speed > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "site needs num_lines >= 1, line_length > 0, spacing > 0");
  }
  SiteMission site;
  site.center = center;
  site.num_lines = num_lines;
  site.line_length = line_length;
  site.spacing = spacing;
  site.orientation = orientation;
  site.depth_ref = depth_ref;
  site.assumed_speed = defaults.assumed_speed;
  site.lead_in = defaults.lead_in;

  const double o = orientation.radians();
  const LocalOffset along{std::sin(o), std::cos(o)};
  const LocalOffset across{std::cos(o), -std::sin(o)};
  const double mid = 0.5 * (num_lines - 1);

  std::vector<GeoPoint> starts;
  for (int i = 0; i < num_lines; ++i) {
    const double dir = (i % 2 == 0) ? 1.0 : -1.0;
    starts.push_back(geo::from_local(center, across * ((i - mid) * spacing) - along * (0.5 * line_length * dir)));
  }
  for (int i = 0; i < num_lines; ++i) {
    LineMission line;
    line.start = starts[i];
    line.heading = Heading(orientation.degrees() + (i % 2 == 0 ? 0.0 : 180.0));
    line.timeout = line_length / site.assumed_speed;
    line.depth_ref = depth_ref;
    line.rendezvous = (i + 1 < num_lines) ? starts[i + 1] : center;
    line.lead_in = site.lead_in;
    line.assumed_speed = site.assumed_speed;
    site.lines.push_back(line);
  }
  return site;
}

CircleMission plan_circle(const GeoPoint& center, double radius, double speed, const DepthRef& depth_ref,
                          double spiral_rate, double duration, Direction direction,
                          const PlannerDefaults& defaults) {
  if (!(radius > 0.0) || !(speed > 0.0) || !(duration > 0.0) || spiral_rate < 0.0) {
    throw Error(ErrorCode::InvalidParams, "circle needs radius, speed, duration > 0 and spiral_rate >= 0");
  }
  if (speed / radius > geo::deg2rad(defaults.max_yaw_rate)) {
    throw Error(ErrorCode::RadiusTooTight, "required yaw rate " +
                                               std::to_string(geo::rad2deg(speed / radius)) +
                                               " deg/s exceeds the limit");
  }
  return CircleMission{center, radius, speed, depth_ref, spiral_rate, duration, direction};
}

GeoPoint line_end(const LineMission& line) {
  return geo::destination(line.start, line.heading, line.timeout * line.assumed_speed);
}

namespace {

void check_depth_ref(const DepthRef& ref, std::vector<Violation>& out) {
  if (!(ref.value > 0.0)) out.push_back({"depth_ref", "depth/altitude reference must be > 0"});
}

void check_line(const LineMission& m, const std::string& prefix, const PlannerDefaults& d,
                std::vector<Violation>& out) {
  if (!(m.timeout > 0.0)) out.push_back({prefix + "timeout", "timeout must be > 0"});
  if (!(m.lead_in >= 0.0)) out.push_back({prefix + "lead_in", "lead_in must be >= 0"});
  if (!(m.assumed_speed > 0.0) || m.assumed_speed > d.max_speed) {
    out.push_back({prefix + "assumed_speed", "assumed_speed must lie in (0, max_speed]"});
  }
  check_depth_ref(m.depth_ref, out);
}

// Samples the planned underwater track roughly every meter.
std::vector<GeoPoint> planned_track(const MissionPlan& plan) {
  std::vector<GeoPoint> pts;
  auto add_line = [&](const LineMission& l) {
    if (!(l.timeout > 0.0) || !(l.assumed_speed > 0.0) || !(l.lead_in >= 0.0)) return;
    const double run = l.timeout * l.assumed_speed;
    const GeoPoint& from = l.start;
    const int n = static_cast<int>(std::ceil(run)) + 1;
    for (int i = 0; i <= n; ++i) pts.push_back(geo::destination(from, l.heading, run * i / n));
  };
  if (const auto* l = std::get_if<LineMission>(&plan)) {
    add_line(*l);
  } else if (const auto* s = std::get_if<SiteMission>(&plan)) {
    for (const auto& l : s->lines) add_line(l);
  } else if (const auto* c = std::get_if<CircleMission>(&plan)) {
    if (c->radius > 0.0) {
      const int n = std::max(16, static_cast<int>(std::ceil(2 * geo::kPi * c->radius)));
      for (int i = 0; i < n; ++i) {
        pts.push_back(geo::destination(c->center, Heading(360.0 * i / n), c->radius));
      }
    }
  }
  return pts;
}

double deepest_planned_depth(const MissionPlan& plan) {
  if (const auto* c = std::get_if<CircleMission>(&plan)) {
    return c->depth_ref.value + c->spiral_rate * c->duration;
  }
  if (const auto* s = std::get_if<SiteMission>(&plan)) return s->depth_ref.value;
  return std::get<LineMission>(plan).depth_ref.value;
}

DepthMode mode_of(const MissionPlan& plan) {
  return std::visit([](const auto& m) { return m.depth_ref.mode; }, plan);
}

}  // namespace

std::vector<Violation> validate(const MissionPlan& plan, const sim::Environment* env,
                                const PlannerDefaults& defaults) {
  std::vector<Violation> out;
  if (const auto* l = std::get_if<LineMission>(&plan)) {
    check_line(*l, "", defaults, out);
  } else if (const auto* s = std::get_if<SiteMission>(&plan)) {
    if (s->num_lines < 1) out.push_back({"num_lines", "num_lines must be >= 1"});
    if (!(s->line_length > 0.0)) out.push_back({"line_length", "line_length must be > 0"});
    if (!(s->spacing > 0.0)) out.push_back({"spacing", "spacing must be > 0"});
    if (!(s->lead_in >= 0.0)) out.push_back({"lead_in", "lead_in must be >= 0"});
    if (!(s->assumed_speed > 0.0) || s->assumed_speed > defaults.max_speed) {
      out.push_back({"assumed_speed", "assumed_speed must lie in (0, max_speed]"});
    }
    check_depth_ref(s->depth_ref, out);
    if (s->num_lines >= 1 && static_cast<int>(s->lines.size()) != s->num_lines) {
      out.push_back({"lines", "derived lines do not match num_lines"});
    }
    for (size_t i = 0; i < s->lines.size(); ++i) {
      check_line(s->lines[i], "lines[" + std::to_string(i) + "].", defaults, out);
    }
  } else {
    const auto& c = std::get<CircleMission>(plan);
    if (!(c.radius > 0.0)) out.push_back({"radius", "radius must be > 0"});
    if (!(c.speed > 0.0) || c.speed > defaults.max_speed) {
      out.push_back({"speed", "speed must lie in (0, max_speed]"});
    }
    if (!(c.duration > 0.0)) out.push_back({"duration", "duration must be > 0"});
    if (!(c.spiral_rate >= 0.0)) out.push_back({"spiral_rate", "spiral_rate must be >= 0"});
    if (c.radius > 0.0 && c.speed / c.radius > geo::deg2rad(defaults.max_yaw_rate)) {
      out.push_back({"radius", "radius too tight for max_yaw_rate"});
    }
    check_depth_ref(c.depth_ref, out);
  }

  if (env != nullptr && env->bathymetry && mode_of(plan) == DepthMode::Depth) {
    const double deepest = deepest_planned_depth(plan);
    for (const GeoPoint& p : planned_track(plan)) {
      const auto seabed = env->bathymetry->try_depth_at(p);
      if (seabed && deepest >= *seabed) {
        out.push_back({"depth_ref", "depth exceeds seabed"});
        break;
      }
    }
  }
  return out;
}

std::string_view type_name(const MissionPlan& plan) {
  switch (plan.index()) {
    case 0: return "line";
    case 1: return "site";
    default: return "circle";
  }
}

std::string to_document(const MissionPlan& plan) { return io::plan_to_json(plan).dump(); }

MissionPlan from_document(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return io::plan_from_json(j);
}

}  // namespace seashark::plan
