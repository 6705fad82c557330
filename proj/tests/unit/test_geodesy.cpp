#include <doctest.h>

#include "oracles.hpp"
#include "seashark/error.hpp"
#include "seashark/geodesy.hpp"

using namespace seashark;
using namespace seashark::geo;

TEST_SUITE("geodesy") {

TEST_CASE("one millidegree of latitude") {
  const auto a = GeoPoint::from_degrees(55.0, 12.0);
  const auto b = GeoPoint::from_degrees(55.001, 12.0);
  CHECK(distance_m(a, b) == doctest::Approx(111.195).epsilon(1e-5));
  CHECK(bearing_deg(a, b).degrees() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("distance agrees with haversine at desk scale") {
  oracle::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double lat = rng.uniform(-70, 70);
    const double lon = rng.uniform(-179, 179);
    const auto a = GeoPoint::from_degrees(lat, lon);
    const auto b = GeoPoint::from_degrees(lat + rng.uniform(-0.02, 0.02), lon + rng.uniform(-0.02, 0.02));
    const double ref = oracle::haversine(a.lat, a.lon, b.lat, b.lon);
    CHECK(std::abs(distance_m(a, b) - ref) <= 1e-3 * ref + 1e-6);
  }
}

TEST_CASE("bearing agrees with the great-circle bearing at desk scale") {
  oracle::Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const double lat = rng.uniform(-70, 70);
    const double lon = rng.uniform(-179, 179);
    const auto a = GeoPoint::from_degrees(lat, lon);
    const auto b = GeoPoint::from_degrees(lat + rng.uniform(-0.01, 0.01), lon + rng.uniform(-0.01, 0.01));
    if (distance_m(a, b) < 50.0) continue;
    const double ref = oracle::initial_bearing(a.lat, a.lon, b.lat, b.lon);
    CHECK(std::abs(oracle::angle_diff(bearing_deg(a, b).degrees(), ref)) < 0.05);
  }
}

TEST_CASE("destination inverts distance and bearing") {
  oracle::Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto a = GeoPoint::from_degrees(rng.uniform(-75, 75), rng.uniform(-180, 180));
    const Heading h(rng.uniform(0, 360));
    const double d = rng.uniform(1.0, 5000.0);
    const auto b = destination(a, h, d);
    CHECK(distance_m(a, b) == doctest::Approx(d).epsilon(1e-9));
    CHECK(std::abs(wrap_angle_error(bearing_deg(a, b), h)) < 1e-7);
  }
}

TEST_CASE("local offsets round trip") {
  const auto origin = GeoPoint::from_degrees(55.7, 12.6);
  const LocalOffset off{123.4, -56.7};
  const LocalOffset back = to_local(origin, from_local(origin, off));
  CHECK(back.east == doctest::Approx(off.east).epsilon(1e-10));
  CHECK(back.north == doctest::Approx(off.north).epsilon(1e-10));
}

TEST_CASE("antimeridian crossing stays short") {
  const auto a = GeoPoint::from_degrees(0.0, 179.9995);
  const auto b = GeoPoint::from_degrees(0.0, -179.9995);
  CHECK(distance_m(a, b) == doctest::Approx(oracle::haversine(0, 179.9995, 0, 180.0005)).epsilon(1e-6));
  CHECK(bearing_deg(a, b).degrees() == doctest::Approx(90.0));
  const auto c = destination(a, Heading(90.0), 200.0);
  CHECK(c.lon < 0.0);
}

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle_error(Heading(10), Heading(350)) == doctest::Approx(20.0));
  CHECK(wrap_angle_error(Heading(350), Heading(10)) == doctest::Approx(-20.0));
  CHECK(wrap_degrees(180.0) == 180.0);
  CHECK(wrap_degrees(-180.0) == 180.0);
  CHECK(wrap_degrees(540.0) == 180.0);
  CHECK(Heading(-90).degrees() == 270.0);
  CHECK(Heading(720).degrees() == 0.0);
  CHECK(normalize_longitude(190.0) == doctest::Approx(-170.0));
  CHECK(normalize_longitude(-180.0) == 180.0);
}

TEST_CASE("wrapped errors always land in (-180, 180]") {
  oracle::Rng rng(14);
  for (int i = 0; i < 2000; ++i) {
    const double e = wrap_angle_error(Heading(rng.uniform(-1000, 1000)), Heading(rng.uniform(-1000, 1000)));
    CHECK(e > -180.0);
    CHECK(e <= 180.0);
  }
}

TEST_CASE("errors") {
  const auto a = GeoPoint::from_degrees(55.0, 12.0);
  CHECK_THROWS_AS(bearing_deg(a, a), Error);
  try {
    bearing_deg(a, a);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSegment);
  }
  CHECK_THROWS_AS(destination(a, Heading(0), -1.0), Error);
  CHECK_THROWS_AS(GeoPoint::from_degrees(91.0, 0.0), Error);
  CHECK(destination(a, Heading(33), 0.0) == a);
}

}  // TEST_SUITE
