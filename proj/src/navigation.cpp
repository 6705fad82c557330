#include "seashark/navigation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>

#include "seashark/error.hpp"

namespace seashark::nav {

std::string_view to_string(NavSource source) {
  return source == NavSource::GnssFix ? "GnssFix" : "DeadReckoned";
}

NavSource nav_source_from_string(std::string_view name) {
  if (name == "GnssFix") return NavSource::GnssFix;
  if (name == "DeadReckoned") return NavSource::DeadReckoned;
  throw Error(ErrorCode::ParseError, "unknown nav source " + std::string(name));
}

void check_monotonic(const Track& track) {
  for (size_t i = 1; i < track.size(); ++i) {
    if (!(track[i].sim_time > track[i - 1].sim_time)) {
      throw Error(ErrorCode::TimeOrderViolation, "track times must strictly increase");
    }
  }
}

NavEstimate dead_reckon_step(const NavEstimate& prev, Heading compass, double assumed_speed, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "dead reckoning dt must be > 0");
  if (!(assumed_speed >= 0.0)) throw Error(ErrorCode::InvalidParams, "assumed speed must be >= 0");
  NavEstimate next;
  next.sim_time = prev.sim_time + dt;
  next.position = geo::destination(prev.position, compass, assumed_speed * dt);
  next.source = NavSource::DeadReckoned;
  next.heading_used = compass;
  next.speed_used = assumed_speed;
  return next;
}

namespace {

struct Segment {
  double t0;
  double t1;
  LocalOffset residual;  // on the tangent plane at fix_before
};

Segment close_segment(const Track& dr, const NavEstimate& fix_before, const NavEstimate& fix_after) {
  if (dr.empty()) throw Error(ErrorCode::InvalidParams, "empty dead-reckoned track");
  if (fix_before.source != NavSource::GnssFix || fix_after.source != NavSource::GnssFix) {
    throw Error(ErrorCode::InvalidParams, "segment endpoints must be GNSS fixes");
  }
  check_monotonic(dr);
  const double t0 = fix_before.sim_time;
  const double t1 = fix_after.sim_time;
  if (t0 > dr.front().sim_time || t1 < dr.back().sim_time) {
    throw Error(ErrorCode::TimeOrderViolation, "fixes must bracket the dead-reckoned track");
  }
  if (!(t1 > t0)) throw Error(ErrorCode::DegenerateDuration, "fix times coincide");
  const LocalOffset dr_span = geo::to_local(dr.front().position, dr.back().position);
  const LocalOffset fix_span = geo::to_local(fix_before.position, fix_after.position);
  return {t0, t1, fix_span - dr_span};
}

}  // namespace

Track reconstruct_track(const Track& dr, const NavEstimate& fix_before, const NavEstimate& fix_after) {
  const Segment seg = close_segment(dr, fix_before, fix_after);
  const double span = seg.t1 - seg.t0;
  Track out;
  out.reserve(dr.size());
  const GeoPoint dr0 = dr.front().position;
  for (const NavEstimate& p : dr) {
    const double frac = (p.sim_time - seg.t0) / span;
    const LocalOffset q = geo::to_local(dr0, p.position) + seg.residual * frac;
    NavEstimate r = p;
    r.position = geo::from_local(fix_before.position, q);
    r.source = NavSource::DeadReckoned;
    out.push_back(r);
  }
  return out;
}

Drift estimate_drift(const NavEstimate& fix_before, const NavEstimate& fix_after, const Track& dr) {
  const Segment seg = close_segment(dr, fix_before, fix_after);
  const double span = seg.t1 - seg.t0;
  return {seg.residual.east / span, seg.residual.north / span};
}

NavEstimate Navigator::update(const sim::SensorFrame& frame, double commanded_speed) {
  NavEstimate est;
  if (frame.gnss) {
    est.sim_time = frame.sim_time;
    est.position = *frame.gnss;
    est.source = NavSource::GnssFix;
    est.heading_used = frame.compass;
    est.speed_used = commanded_speed;
  } else if (last_) {
    est = dead_reckon_step(*last_, frame.compass, commanded_speed, frame.sim_time - last_->sim_time);
    est.sim_time = frame.sim_time;
  } else {
    throw Error(ErrorCode::InvalidState, "navigation needs an initial GNSS fix");
  }
  last_ = est;
  return est;
}

std::string export_track_text(const Track& track) {
  std::string out;
  for (const auto& e : track) {
    out += fmt::format("{:.3f} {:.6f} {:.6f} {}\n", e.sim_time, e.position.lat, e.position.lon,
                       to_string(e.source));
  }
  return out;
}

Track parse_track_text(std::string_view text) {
  Track track;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    NavEstimate e;
    std::string source;
    if (!(ls >> e.sim_time >> e.position.lat >> e.position.lon >> source)) {
      throw Error(ErrorCode::ParseError, "bad track line: " + line);
    }
    e.source = nav_source_from_string(source);
    track.push_back(e);
  }
  return track;
}

std::string export_geotrack(const Track& track, std::string_view name) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<kml xmlns=\"http://www.opengis.net/kml/2.2\">\n"
      "<Document>\n"
      "<Placemark>\n";
  out += fmt::format("<name>{}</name>\n", name);
  out += "<LineString>\n<tessellate>1</tessellate>\n<coordinates>\n";
  for (const auto& e : track) {
    out += fmt::format("{:.9f},{:.9f}\n", e.position.lon, e.position.lat);
  }
  out += "</coordinates>\n</LineString>\n</Placemark>\n</Document>\n</kml>\n";
  return out;
}

}  // namespace seashark::nav
