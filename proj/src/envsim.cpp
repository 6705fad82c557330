#include "seashark/envsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "seashark/error.hpp"

namespace seashark::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double point_segment_distance(const LocalOffset& p, const LocalOffset& a, const LocalOffset& b) {
  const LocalOffset ab = b - a;
  const double len2 = ab.east * ab.east + ab.north * ab.north;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.east - a.east) * ab.east + (p.north - a.north) * ab.north) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  return (p - (a + ab * t)).norm();
}

}  // namespace

CurrentField CurrentField::uniform(double east, double north) {
  CurrentField f;
  f.base = {east, north};
  return f;
}

LocalOffset CurrentField::at(const GeoPoint& p) const {
  if (is_uniform()) return base;
  const LocalOffset d = geo::to_local(origin, p);
  return {base.east + de_de * d.east + de_dn * d.north,
          base.north + dn_de * d.east + dn_dn * d.north};
}

Bathymetry::Bathymetry(int ncols, int nrows, double lat0, double lon0, double dlat, double dlon,
                       std::vector<double> depths)
    : ncols_(ncols), nrows_(nrows), lat0_(lat0), lon0_(lon0), dlat_(dlat), dlon_(dlon),
      depths_(std::move(depths)) {
  if (ncols_ < 2 || nrows_ < 2 || !(dlat_ > 0.0) || !(dlon_ > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "bathymetry grid needs >= 2x2 nodes and positive steps");
  }
  if (depths_.size() != static_cast<size_t>(ncols_) * nrows_) {
    throw Error(ErrorCode::InvalidParams, "bathymetry node count does not match header");
  }
  for (double d : depths_) {
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidParams, "bathymetry depths must be > 0");
  }
}

Bathymetry Bathymetry::parse(std::istream& in) {
  int ncols = 0;
  int nrows = 0;
  double lat0 = 0, lon0 = 0, dlat = 0, dlon = 0;
  if (!(in >> ncols >> nrows >> lat0 >> lon0 >> dlat >> dlon)) {
    throw Error(ErrorCode::ParseError, "bathymetry header must be `ncols nrows lat0 lon0 dlat dlon`");
  }
  if (ncols <= 0 || nrows <= 0) throw Error(ErrorCode::ParseError, "bathymetry dimensions");
  std::vector<double> depths;
  depths.reserve(static_cast<size_t>(ncols) * nrows);
  double v = 0.0;
  while (in >> v) depths.push_back(v);
  if (!in.eof()) throw Error(ErrorCode::ParseError, "non-numeric bathymetry value");
  return Bathymetry(ncols, nrows, lat0, lon0, dlat, dlon, std::move(depths));
}

Bathymetry Bathymetry::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open bathymetry file " + path);
  return parse(f);
}

Bathymetry Bathymetry::flat(const GeoPoint& center, double half_extent_m, double depth) {
  const GeoPoint sw = geo::from_local(center, {-half_extent_m, -half_extent_m});
  const GeoPoint ne = geo::from_local(center, {half_extent_m, half_extent_m});
  return Bathymetry(2, 2, sw.lat, sw.lon, ne.lat - sw.lat, ne.lon - sw.lon,
                    std::vector<double>(4, depth));
}

std::optional<double> Bathymetry::try_depth_at(const GeoPoint& p) const {
  const double fi = (p.lat - lat0_) / dlat_;
  const double fj = geo::normalize_longitude(p.lon - lon0_) / dlon_;
  constexpr double kEps = 1e-9;
  if (fi < -kEps || fj < -kEps || fi > nrows_ - 1 + kEps || fj > ncols_ - 1 + kEps) {
    return std::nullopt;
  }
  const int i = std::clamp(static_cast<int>(std::floor(fi)), 0, nrows_ - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fj)), 0, ncols_ - 2);
  const double u = std::clamp(fi - i, 0.0, 1.0);
  const double w = std::clamp(fj - j, 0.0, 1.0);
  return (1 - u) * (1 - w) * node(i, j) + (1 - u) * w * node(i, j + 1) +
         u * (1 - w) * node(i + 1, j) + u * w * node(i + 1, j + 1);
}

double Bathymetry::depth_at(const GeoPoint& p) const {
  if (auto d = try_depth_at(p)) return *d;
  throw Error(ErrorCode::OutOfGrid, "position outside bathymetry grid");
}

void Environment::validate() const {
  if (!(surface_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "surface_threshold must be > 0");
  }
  if (compass_noise_sigma < 0 || gnss_noise_sigma < 0 || depth_noise_sigma < 0 ||
      altitude_noise_sigma < 0 || !(altimeter_max_range > 0)) {
    throw Error(ErrorCode::InvalidParams, "noise sigmas must be >= 0");
  }
}

std::optional<double> Environment::seabed_depth(const GeoPoint& p) const {
  if (!bathymetry) return std::nullopt;
  return bathymetry->try_depth_at(p);
}

bool Environment::object_seen(const GeoPoint& p) const {
  for (const auto& obj : objects) {
    const LocalOffset a{};
    const LocalOffset b = geo::to_local(obj.a, obj.b);
    if (point_segment_distance(geo::to_local(obj.a, p), a, b) <= obj.half_width) return true;
  }
  return false;
}

double seabed_depth_at(const Environment& env, const GeoPoint& p) {
  if (!env.bathymetry) throw Error(ErrorCode::OutOfGrid, "no bathymetry loaded");
  return env.bathymetry->depth_at(p);
}

ActuatorCommand ActuatorCommand::saturated(const VehicleLimits& limits) const {
  return {std::clamp(target_speed, 0.0, limits.max_speed),
          std::clamp(yaw_rate, -limits.max_yaw_rate, limits.max_yaw_rate),
          std::clamp(vertical_rate, -limits.max_vr, limits.max_vr)};
}

VehicleState step(const VehicleState& state, const ActuatorCommand& raw_cmd,
                  const Environment& env, double dt, const VehicleLimits& limits) {
  if (!(dt > 0.0) || dt > 1.0) throw Error(ErrorCode::InvalidDt, "dt must lie in (0, 1]");
  const ActuatorCommand cmd = raw_cmd.saturated(limits);

  VehicleState next = state;
  next.heading = Heading(state.heading.degrees() + cmd.yaw_rate * dt);
  next.speed = state.speed + (cmd.target_speed - state.speed) * (1.0 - std::exp(-dt / limits.speed_tau));

  const double h = next.heading.radians();
  const LocalOffset current = env.current.at(state.position);
  const double run = next.speed * dt;
  next.position = geo::from_local(
      state.position, {run * std::sin(h) + current.east * dt, run * std::cos(h) + current.north * dt});

  double depth = std::max(0.0, state.depth + cmd.vertical_rate * dt);
  if (auto seabed = env.seabed_depth(next.position)) {
    depth = std::min(depth, std::max(0.0, *seabed - limits.seabed_clearance));
  }
  next.vertical_rate = (depth - state.depth) / dt;
  next.depth = depth;
  next.sim_time = state.sim_time + dt;
  return next;
}

SensorFrame sample_sensors(const VehicleState& state, const Environment& env, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> unit(0.0, 1.0);
  // Fixed draw order keeps frames reproducible regardless of which channels report.
  const double n_compass = unit(rng);
  const double n_depth = unit(rng);
  const double n_alt = unit(rng);
  const double n_east = unit(rng);
  const double n_north = unit(rng);

  SensorFrame f;
  f.sim_time = state.sim_time;
  f.compass = Heading(state.heading.degrees() + env.compass_bias + env.compass_noise_sigma * n_compass);
  f.depth = state.depth + env.depth_noise_sigma * n_depth;
  if (auto seabed = env.seabed_depth(state.position)) {
    const double alt = *seabed - state.depth + env.altitude_noise_sigma * n_alt;
    if (alt <= env.altimeter_max_range) f.altitude = alt;
  }
  if (state.depth <= env.surface_threshold) {
    if (env.gnss_noise_sigma > 0.0) {
      f.gnss = geo::from_local(state.position,
                               {env.gnss_noise_sigma * n_east, env.gnss_noise_sigma * n_north});
    } else {
      f.gnss = state.position;
    }
  }
  f.object_seen = env.object_seen(state.position);
  return f;
}

Simulator::Simulator(VehicleState initial, Environment env, VehicleLimits limits, std::uint64_t seed,
                     double tick_dt, double photo_interval)
    : state_(initial), env_(std::move(env)), limits_(limits), seed_(seed), dt_(tick_dt) {
  env_.validate();
  if (!(dt_ > 0.0) || dt_ > 1.0) throw Error(ErrorCode::InvalidDt, "tick dt must lie in (0, 1]");
  photo_every_ = photo_interval > 0.0
                     ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(photo_interval / dt_)))
                     : 0;
  state_.sim_time = 0.0;
}

SensorFrame Simulator::sense() const {
  SensorFrame f = sample_sensors(state_, env_, seed_ ^ splitmix64(tick_));
  if (photo_every_ != 0 && tick_ % photo_every_ == 0) {
    f.image_ref = "img-" + std::to_string(tick_ / photo_every_);
  }
  return f;
}

void Simulator::advance(const ActuatorCommand& cmd) {
  state_ = step(state_, cmd, env_, dt_, limits_);
  ++tick_;
  state_.sim_time = static_cast<double>(tick_) * dt_;
}

void Simulator::reconfigure(Environment env, VehicleLimits limits) {
  env.validate();
  env_ = std::move(env);
  limits_ = limits;
}

}  // namespace seashark::sim
