#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "test_util.hpp"
#include "seashark/envsim.hpp"
#include "seashark/error.hpp"

using namespace seashark;
using namespace seashark::sim;
using geo::GeoPoint;
using geo::Heading;

namespace {

const GeoPoint kHome = GeoPoint::from_degrees(55.7, 12.6);

VehicleState at_home(double heading = 0.0, double speed = 0.0) {
  VehicleState s;
  s.position = kHome;
  s.heading = Heading(heading);
  s.speed = speed;
  return s;
}

}  // namespace

TEST_SUITE("envsim") {

TEST_CASE("straight run at constant speed") {
  Environment env;
  VehicleState s = at_home(90.0, 1.0);
  for (int i = 0; i < 100; ++i) s = step(s, {1.0, 0.0, 0.0}, env, 0.1);
  const auto d = geo::to_local(kHome, s.position);
  CHECK(d.east == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(std::abs(d.north) < 1e-9);
  CHECK(s.sim_time == doctest::Approx(10.0));
}

TEST_CASE("uniform current displaces a stopped vehicle") {
  Environment env;
  env.current = CurrentField::uniform(0.2, -0.1);
  VehicleState s = at_home();
  for (int i = 0; i < 50; ++i) s = step(s, {0.0, 0.0, 0.0}, env, 0.1);
  const auto d = geo::to_local(kHome, s.position);
  CHECK(d.east == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.north == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("speed follows a first-order lag") {
  Environment env;
  VehicleLimits lim;
  VehicleState s = at_home();
  for (int i = 0; i < 20; ++i) s = step(s, {1.0, 0.0, 0.0}, env, 0.1, lim);
  // After one time constant the response reaches 1 - 1/e.
  CHECK(s.speed == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("commands saturate at the vehicle limits") {
  Environment env;
  VehicleState s = at_home(0.0, 1.5);
  s = step(s, {9.0, 500.0, 9.0}, env, 0.1);
  CHECK(s.heading.degrees() == doctest::Approx(3.0));
  CHECK(s.depth == doctest::Approx(0.03));
  CHECK(s.speed == doctest::Approx(1.5));
}

TEST_CASE("depth stays between the surface and the seabed clearance") {
  Environment env;
  env.bathymetry = Bathymetry::flat(kHome, 500.0, 5.0);
  VehicleState s = at_home();
  for (int i = 0; i < 400; ++i) s = step(s, {0.0, 0.0, 0.3}, env, 0.1);
  CHECK(s.depth == doctest::Approx(4.9));
  for (int i = 0; i < 400; ++i) s = step(s, {0.0, 0.0, -0.3}, env, 0.1);
  CHECK(s.depth == 0.0);
}

TEST_CASE("step rejects bad dt") {
  Environment env;
  CHECK(error_code([&] { step(at_home(), {}, env, 0.0); }) == ErrorCode::InvalidDt);
  CHECK(error_code([&] { step(at_home(), {}, env, 1.5); }) == ErrorCode::InvalidDt);
  CHECK(error_code([&] { step(at_home(), {}, env, -0.1); }) == ErrorCode::InvalidDt);
}

TEST_CASE("bilinear bathymetry") {
  Bathymetry grid(2, 2, 55.0, 12.0, 0.01, 0.01, {5.0, 10.0, 10.0, 15.0});
  CHECK(grid.depth_at(GeoPoint::from_degrees(55.005, 12.005)) == doctest::Approx(10.0));
  CHECK(grid.depth_at(GeoPoint::from_degrees(55.0, 12.0)) == doctest::Approx(5.0));
  CHECK(grid.depth_at(GeoPoint::from_degrees(55.01, 12.01)) == doctest::Approx(15.0));
  CHECK(grid.depth_at(GeoPoint::from_degrees(55.0, 12.0025)) == doctest::Approx(6.25));
  CHECK(error_code([&] { grid.depth_at(GeoPoint::from_degrees(55.02, 12.0)); }) == ErrorCode::OutOfGrid);
  CHECK_FALSE(grid.try_depth_at(GeoPoint::from_degrees(54.9, 12.0)).has_value());
}

TEST_CASE("bathymetry text format") {
  std::istringstream in("3 2 55.0 12.0 0.01 0.01\n4 5 6\n7 8 9\n");
  const auto grid = Bathymetry::parse(in);
  CHECK(grid.ncols() == 3);
  CHECK(grid.node(1, 2) == 9.0);
  std::istringstream bad("3 2 55.0 12.0 0.01 0.01\n4 5 x\n");
  CHECK(error_code([&] { Bathymetry::parse(bad); }) == ErrorCode::ParseError);
  std::istringstream short_grid("3 2 55.0 12.0 0.01 0.01\n4 5 6\n");
  CHECK(error_code([&] { Bathymetry::parse(short_grid); }) == ErrorCode::InvalidParams);
}

TEST_CASE("altimeter measures height above the seabed") {
  Environment env;
  env.bathymetry = Bathymetry::flat(kHome, 500.0, 10.0);
  VehicleState s = at_home();
  s.depth = 3.0;
  const SensorFrame f = sample_sensors(s, env, 1);
  REQUIRE(f.altitude.has_value());
  CHECK(*f.altitude == doctest::Approx(7.0));
  CHECK_FALSE(f.gnss.has_value());

  env.altimeter_max_range = 5.0;
  CHECK_FALSE(sample_sensors(s, env, 1).altitude.has_value());
  Environment no_grid;
  CHECK_FALSE(sample_sensors(s, no_grid, 1).altitude.has_value());
}

TEST_CASE("GNSS is present exactly at the surface") {
  Environment env;
  env.gnss_noise_sigma = 0.5;
  oracle::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    VehicleState s = at_home();
    s.depth = rng.uniform(0.0, 1.0);
    const auto f = sample_sensors(s, env, static_cast<std::uint64_t>(i));
    CHECK(f.gnss.has_value() == (s.depth <= env.surface_threshold));
  }
}

TEST_CASE("sensor noise is deterministic per seed") {
  Environment env;
  env.compass_noise_sigma = 1.0;
  env.gnss_noise_sigma = 1.0;
  env.depth_noise_sigma = 0.1;
  const auto s = at_home(45.0);
  CHECK(sample_sensors(s, env, 99) == sample_sensors(s, env, 99));
  CHECK_FALSE(sample_sensors(s, env, 99) == sample_sensors(s, env, 100));
  env.compass_bias = 2.0;
  env.compass_noise_sigma = 0.0;
  CHECK(sample_sensors(s, env, 5).compass.degrees() == doctest::Approx(47.0));
}

TEST_CASE("object region flags frames inside the corridor") {
  Environment env;
  env.objects.push_back({geo::from_local(kHome, {0, 0}), geo::from_local(kHome, {50, 0}), 3.0});
  VehicleState s = at_home();
  s.position = geo::from_local(kHome, {25.0, 2.0});
  CHECK(sample_sensors(s, env, 1).object_seen);
  s.position = geo::from_local(kHome, {25.0, 4.0});
  CHECK_FALSE(sample_sensors(s, env, 1).object_seen);
  s.position = geo::from_local(kHome, {52.0, 0.0});
  CHECK(sample_sensors(s, env, 1).object_seen);
}

TEST_CASE("simulator clock and photo cadence") {
  Environment env;
  Simulator sim(at_home(), env, {}, 7, 0.1, 1.0);
  int photos = 0;
  for (int i = 0; i < 25; ++i) {
    const auto f = sim.sense();
    CHECK(f.sim_time == doctest::Approx(0.1 * i));
    if (f.image_ref) ++photos;
    sim.advance({1.0, 0.0, 0.0});
  }
  CHECK(photos == 3);
  CHECK(sim.tick_index() == 25);
  CHECK(sim.state().sim_time == doctest::Approx(2.5));
}

TEST_CASE("sheared current varies with position") {
  CurrentField f;
  f.origin = kHome;
  f.de_dn = 0.001;
  const auto c = f.at(geo::from_local(kHome, {0.0, 100.0}));
  CHECK(c.east == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(c.north == 0.0);
}

}  // TEST_SUITE
