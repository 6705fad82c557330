#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "seashark/geodesy.hpp"

namespace seashark::sim {

using geo::GeoPoint;
using geo::Heading;
using geo::LocalOffset;

/// True pose of the simulated vehicle. Depth is positive down, 0 at the surface.
struct VehicleState {
  GeoPoint position;
  double depth = 0.0;
  Heading heading;
  double speed = 0.0;  // through-water, m/s
  double vertical_rate = 0.0;
  double sim_time = 0.0;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// Water current: base + gradient * (offset from origin). The default is uniform.
struct CurrentField {
  LocalOffset base;  // east/north m/s
  GeoPoint origin;
  // d(current)/d(position), 1/s
  double de_de = 0.0;
  double de_dn = 0.0;
  double dn_de = 0.0;
  double dn_dn = 0.0;

  static CurrentField uniform(double east, double north);
  bool is_uniform() const { return de_de == 0.0 && de_dn == 0.0 && dn_de == 0.0 && dn_dn == 0.0; }
  LocalOffset at(const GeoPoint& p) const;
};

/// Regular seabed-depth grid, row-major from (lat0, lon0). Row i sits at
/// lat0 + i*dlat, column j at lon0 + j*dlon.
class Bathymetry {
 public:
  Bathymetry(int ncols, int nrows, double lat0, double lon0, double dlat, double dlon,
             std::vector<double> depths);

  /// Plain-text grid: header `ncols nrows lat0 lon0 dlat dlon`, then depths.
  static Bathymetry parse(std::istream& in);
  static Bathymetry load(const std::string& path);
  /// Uniform-depth grid covering a square of `half_extent_m` around `center`.
  static Bathymetry flat(const GeoPoint& center, double half_extent_m, double depth);

  /// Bilinear interpolation; throws OutOfGrid outside the grid hull.
  double depth_at(const GeoPoint& p) const;
  std::optional<double> try_depth_at(const GeoPoint& p) const;

  double node(int row, int col) const { return depths_[static_cast<size_t>(row) * ncols_ + col]; }
  int ncols() const { return ncols_; }
  int nrows() const { return nrows_; }

 private:
  int ncols_;
  int nrows_;
  double lat0_;
  double lon0_;
  double dlat_;
  double dlon_;
  std::vector<double> depths_;
};

struct Environment {
  CurrentField current;
  std::optional<Bathymetry> bathymetry;
  double compass_bias = 0.0;          // degrees
  double compass_noise_sigma = 0.0;   // degrees
  double gnss_noise_sigma = 0.0;      // meters
  double depth_noise_sigma = 0.0;     // meters
  double altitude_noise_sigma = 0.0;  // meters
  double surface_threshold = 0.3;     // meters
  double altimeter_max_range = 50.0;  // meters
  /// Corridor of half_width meters around segment a-b where the payload flags an object.
  struct ObjectRegion {
    GeoPoint a;
    GeoPoint b;
    double half_width = 3.0;
  };
  std::vector<ObjectRegion> objects;

  /// Throws InvalidParams when surface_threshold <= 0 or grid depths are not positive.
  void validate() const;
  std::optional<double> seabed_depth(const GeoPoint& p) const;
  bool object_seen(const GeoPoint& p) const;
};

/// One time-stamped sample of all simulated sensors.
struct SensorFrame {
  double sim_time = 0.0;
  Heading compass;
  double depth = 0.0;
  std::optional<double> altitude;  // empty: NoReturn
  std::optional<GeoPoint> gnss;    // empty: Unavailable
  std::optional<std::string> image_ref;
  bool object_seen = false;

  friend bool operator==(const SensorFrame&, const SensorFrame&) = default;
};

struct VehicleLimits {
  double max_speed = 1.5;      // m/s
  double max_yaw_rate = 30.0;  // deg/s
  double max_vr = 0.3;         // m/s
  double speed_tau = 2.0;      // s, first-order speed lag
  double seabed_clearance = 0.1;
};

struct ActuatorCommand {
  double target_speed = 0.0;
  double yaw_rate = 0.0;  // deg/s, positive turns clockwise
  double vertical_rate = 0.0;  // m/s, positive dives

  ActuatorCommand saturated(const VehicleLimits& limits) const;
};

/// Kinematic step: throws InvalidDt unless 0 < dt <= 1.
VehicleState step(const VehicleState& state, const ActuatorCommand& cmd, const Environment& env,
                  double dt, const VehicleLimits& limits = {});

/// Deterministic in (state, env, seed). image_ref is left empty; the caller
/// decides photo cadence.
SensorFrame sample_sensors(const VehicleState& state, const Environment& env, std::uint64_t seed);

/// Same as Environment::seabed_depth but throwing OutOfGrid.
double seabed_depth_at(const Environment& env, const GeoPoint& p);

/// Owns the vehicle state and advances it with per-tick seeds.
class Simulator {
 public:
  Simulator(VehicleState initial, Environment env, VehicleLimits limits, std::uint64_t seed,
            double tick_dt = 0.1, double photo_interval = 1.0);

  const VehicleState& state() const { return state_; }
  const Environment& environment() const { return env_; }
  Environment& environment() { return env_; }
  const VehicleLimits& limits() const { return limits_; }
  std::uint64_t tick_index() const { return tick_; }
  double tick_dt() const { return dt_; }

  SensorFrame sense() const;
  void advance(const ActuatorCommand& cmd);
  /// Swaps environment and limits; pose, clock and seed carry over.
  void reconfigure(Environment env, VehicleLimits limits);

 private:
  VehicleState state_;
  Environment env_;
  VehicleLimits limits_;
  std::uint64_t seed_;
  double dt_;
  std::uint64_t photo_every_;
  std::uint64_t tick_ = 0;
};

}  // namespace seashark::sim
