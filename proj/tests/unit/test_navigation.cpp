#include <doctest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "seashark/envsim.hpp"
#include "seashark/navigation.hpp"

using namespace seashark;
using namespace seashark::nav;

namespace {

const GeoPoint kHome = GeoPoint::from_degrees(55.7, 12.6);

NavEstimate fix(const GeoPoint& p, double t) {
  NavEstimate e;
  e.sim_time = t;
  e.position = p;
  e.source = NavSource::GnssFix;
  return e;
}

// Dead-reckons a straight dive at `speed` along `heading` for `n` ticks from `start`.
Track straight_dr(const NavEstimate& start, double heading, double speed, int n, double dt = 0.1) {
  Track t{start};
  for (int i = 0; i < n; ++i) t.push_back(dead_reckon_step(t.back(), Heading(heading), speed, dt));
  return t;
}

}  // namespace

TEST_SUITE("navigation") {

TEST_CASE("dead reckoning advances along the compass heading") {
  const auto start = fix(kHome, 0.0);
  const auto next = dead_reckon_step(start, Heading(45), 2.0, 0.5);
  CHECK(next.sim_time == doctest::Approx(0.5));
  CHECK(next.source == NavSource::DeadReckoned);
  CHECK(geo::distance_m(kHome, next.position) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(oracle::angle_diff(geo::bearing_deg(kHome, next.position).degrees(), 45.0)) < 1e-6);
}

TEST_CASE("reconstruction pins both ends") {
  const auto dr = straight_dr(fix(kHome, 0.0), 90.0, 1.0, 100);
  const auto fb = fix(kHome, 0.0);
  const auto fa = fix(geo::from_local(kHome, {12.0, -3.0}), 10.0);
  const auto out = reconstruct_track(dr, fb, fa);
  REQUIRE(out.size() == dr.size());
  CHECK(geo::distance_m(out.front().position, fb.position) < 1e-9);
  CHECK(geo::distance_m(out.back().position, fa.position) < 1e-6);
  const auto mid = geo::to_local(kHome, out[50].position);
  CHECK(mid.east == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(mid.north == doctest::Approx(-1.5).epsilon(1e-6));
}

TEST_CASE("constant current reconstruction is exact") {
  sim::Environment env;
  env.current = sim::CurrentField::uniform(0.2, 0.0);
  sim::VehicleState truth;
  truth.position = kHome;
  truth.heading = geo::Heading(0);
  truth.speed = 1.0;
  Track dr{fix(kHome, 0.0)};
  std::vector<GeoPoint> true_pos{kHome};
  for (int i = 0; i < 300; ++i) {
    truth = sim::step(truth, {1.0, 0.0, 0.0}, env, 0.1);
    dr.push_back(dead_reckon_step(dr.back(), truth.heading, 1.0, 0.1));
    true_pos.push_back(truth.position);
  }
  const double t1 = dr.back().sim_time;
  const auto out = reconstruct_track(dr, fix(kHome, 0.0), fix(truth.position, t1));
  double worst = 0.0;
  for (size_t i = 0; i < out.size(); ++i) worst = std::max(worst, geo::distance_m(out[i].position, true_pos[i]));
  CHECK(worst < 1e-3);
  const auto d = estimate_drift(fix(kHome, 0.0), fix(truth.position, t1), dr);
  CHECK(d.east == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(std::abs(d.north) < 1e-6);
}

TEST_CASE("reconstruction is linear in the closing residual") {
  oracle::Rng rng(41);
  for (int k = 0; k < 50; ++k) {
    const int n = rng.integer(5, 400);
    const auto dr = straight_dr(fix(kHome, 0.0), rng.uniform(0, 360), rng.uniform(0.3, 1.5), n);
    const double t1 = dr.back().sim_time;
    const auto fa = fix(geo::destination(dr.back().position, Heading(rng.uniform(0, 360)), rng.uniform(0, 50)), t1);
    const auto out = reconstruct_track(dr, fix(kHome, 0.0), fa);
    const auto r = geo::to_local(dr.back().position, fa.position);
    for (size_t i = 0; i < out.size(); i += 7) {
      const double frac = dr[i].sim_time / t1;
      const auto delta = geo::to_local(dr[i].position, out[i].position);
      CHECK(delta.east == doctest::Approx(r.east * frac).epsilon(1e-4).scale(1.0));
      CHECK(delta.north == doctest::Approx(r.north * frac).epsilon(1e-4).scale(1.0));
      CHECK(out[i].sim_time == dr[i].sim_time);
    }
  }
}

TEST_CASE("reconstruction errors") {
  const auto dr = straight_dr(fix(kHome, 0.0), 0.0, 1.0, 10);
  CHECK(error_code([&] { reconstruct_track(Track{fix(kHome, 0.0)}, fix(kHome, 0.0), fix(kHome, 0.0)); }) ==
        ErrorCode::DegenerateDuration);
  CHECK(error_code([&] { reconstruct_track(dr, fix(kHome, 1.0), fix(kHome, 0.5)); }) ==
        ErrorCode::TimeOrderViolation);
  Track shuffled = dr;
  std::swap(shuffled[2], shuffled[3]);
  CHECK(error_code([&] { check_monotonic(shuffled); }) == ErrorCode::TimeOrderViolation);
  CHECK(error_code([&] { reconstruct_track(shuffled, fix(kHome, 0.0), fix(kHome, 1.0)); }) ==
        ErrorCode::TimeOrderViolation);
  CHECK_NOTHROW(check_monotonic(dr));
}

TEST_CASE("online navigator switches between GNSS and dead reckoning") {
  Navigator n;
  sim::SensorFrame f;
  f.sim_time = 0.0;
  f.gnss = kHome;
  f.compass = Heading(0);
  auto e = n.update(f, 1.0);
  CHECK(e.source == NavSource::GnssFix);
  f.gnss.reset();
  f.sim_time = 1.0;
  e = n.update(f, 1.0);
  CHECK(e.source == NavSource::DeadReckoned);
  CHECK(geo::to_local(kHome, e.position).north == doctest::Approx(1.0).epsilon(1e-9));
  n.reset();
  CHECK_FALSE(n.last().has_value());
}

TEST_CASE("track text round trip") {
  const auto dr = straight_dr(fix(kHome, 0.0), 30.0, 1.0, 20);
  const auto text = export_track_text(dr);
  const auto back = parse_track_text(text);
  REQUIRE(back.size() == dr.size());
  for (size_t i = 0; i < dr.size(); ++i) {
    CHECK(back[i].sim_time == doctest::Approx(dr[i].sim_time));
    CHECK(geo::distance_m(back[i].position, dr[i].position) < 0.1);
    CHECK(back[i].source == dr[i].source);
  }
  CHECK(error_code([] { parse_track_text("1.0 55.0 oops GnssFix\n"); }) == ErrorCode::ParseError);
  const auto kml = export_geotrack(dr, "run");
  CHECK(kml.find("<LineString>") != std::string::npos);
  CHECK(kml.find("12.600000000,55.700000000") != std::string::npos);
}

TEST_CASE("source names") {
  CHECK(nav_source_from_string(to_string(NavSource::GnssFix)) == NavSource::GnssFix);
  CHECK(nav_source_from_string(to_string(NavSource::DeadReckoned)) == NavSource::DeadReckoned);
  CHECK(error_code([] { nav_source_from_string("Lidar"); }) == ErrorCode::ParseError);
}

}  // TEST_SUITE
