#include <doctest.h>

#include "test_util.hpp"
#include "seashark/executor.hpp"

using namespace seashark;
using namespace seashark::exec;
using geo::GeoPoint;
using geo::Heading;
using plan::DepthRef;

namespace {

const GeoPoint kHome = GeoPoint::from_degrees(55.7, 12.6);
const plan::PlannerDefaults kNoLeadIn{0.0};

sim::SensorFrame surface_at(const GeoPoint& p, double t, double heading = 0.0) {
  sim::SensorFrame f;
  f.sim_time = t;
  f.gnss = p;
  f.compass = Heading(heading);
  f.depth = 0.0;
  f.altitude = 20.0;
  return f;
}

sim::SensorFrame submerged(double depth, double t, double heading = 0.0) {
  sim::SensorFrame f;
  f.sim_time = t;
  f.compass = Heading(heading);
  f.depth = depth;
  f.altitude = 20.0 - depth;
  return f;
}

plan::LineMission line_here(double timeout = 20.0, double lead_in = 0.0) {
  auto m = plan::plan_line(kHome, Heading(90), timeout, DepthRef::depth(2.0));
  m.lead_in = lead_in;
  return m;
}

// Ticks at 10 Hz from `t` with the given frame source until `done` or the budget runs out.
template <class Frame, class Done>
double run_until(Executor& ex, double t, Frame&& frame, Done&& done, int budget = 100000) {
  for (int i = 0; i < budget && !done(); ++i) {
    t += 0.1;
    ex.tick(frame(t), t);
  }
  return t;
}

}  // namespace

TEST_SUITE("executor") {

TEST_CASE("phase names round trip") {
  for (auto p : {ExecPhase::Idle, ExecPhase::LeadIn, ExecPhase::Dive, ExecPhase::RunLine, ExecPhase::RunCircle,
                 ExecPhase::Ascend, ExecPhase::ReturnTransit, ExecPhase::TransitToNextLine, ExecPhase::Loiter,
                 ExecPhase::Complete, ExecPhase::Aborted}) {
    CHECK(phase_from_string(to_string(p)) == p);
  }
  CHECK(error_code([] { phase_from_string("Sleep"); }) == ErrorCode::ParseError);
}

TEST_CASE("start requires a fix and a valid plan") {
  Executor ex;
  CHECK(error_code([&] { ex.start(line_here(), submerged(1.0, 0.0), 0.0); }) == ErrorCode::NotAtSurface);
  auto bad = line_here();
  bad.timeout = -1.0;
  CHECK(error_code([&] { ex.start(bad, surface_at(kHome, 0.0), 0.0); }) == ErrorCode::InvalidPlan);
  CHECK(ex.state().phase == ExecPhase::Idle);
}

TEST_CASE("line mission walks through every phase") {
  Executor ex;
  ex.start(line_here(20.0), surface_at(kHome, 0.0), 0.0);
  CHECK(ex.state().phase == ExecPhase::Dive);

  double t = 0.0;
  double depth = 0.0;
  t = run_until(ex, t, [&](double now) { depth = std::min(2.0, depth + 0.05); return submerged(depth, now, 90); },
                [&] { return ex.state().phase != ExecPhase::Dive; });
  CHECK(ex.state().phase == ExecPhase::RunLine);
  const double run_start = t;
  t = run_until(ex, t, [&](double now) { return submerged(2.0, now, 90); },
                [&] { return ex.state().phase != ExecPhase::RunLine; });
  CHECK(ex.state().phase == ExecPhase::Ascend);
  CHECK(t - run_start == doctest::Approx(20.0).epsilon(0.006));

  // Still submerged: keep ascending.
  t += 0.1;
  ex.tick(submerged(1.0, t), t);
  CHECK(ex.state().phase == ExecPhase::Ascend);
  const GeoPoint away = geo::from_local(kHome, {20.0, 0.0});
  t += 0.1;
  ex.tick(surface_at(away, t, 90), t);
  CHECK(ex.state().phase == ExecPhase::ReturnTransit);
  CHECK(std::abs(geo::wrap_angle_error(ex.state().refs.heading, Heading(270))) < 1e-6);
  t += 0.1;
  ex.tick(surface_at(geo::from_local(kHome, {2.0, 0.0}), t), t);
  CHECK(ex.state().phase == ExecPhase::Complete);
  CHECK_FALSE(is_active(ex.state().phase));
}

TEST_CASE("line start far away transits to the lead-in point first") {
  Executor ex;
  const auto start = geo::from_local(kHome, {0.0, 100.0});
  auto line = plan::plan_line(start, Heading(90), 30.0, DepthRef::depth(2.0), kHome);
  line.lead_in = 10.0;
  ex.start(line, surface_at(kHome, 0.0), 0.0);
  CHECK(ex.state().phase == ExecPhase::TransitToNextLine);
  REQUIRE(ex.state().transit_target.has_value());
  const auto target = geo::to_local(kHome, *ex.state().transit_target);
  CHECK(geo::distance_m(*ex.state().transit_target, start) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(target.east == doctest::Approx(-10.0).epsilon(1e-4));
  CHECK(target.north == doctest::Approx(100.0).epsilon(1e-4));
  ex.tick(surface_at(*ex.state().transit_target, 0.1), 0.1);
  CHECK(ex.state().phase == ExecPhase::LeadIn);
  CHECK(ex.state().refs.heading == Heading(90));
  // 10 m at 1 m/s.
  const double t = run_until(ex, 0.1, [&](double now) { return surface_at(start, now); },
                             [&] { return ex.state().phase != ExecPhase::LeadIn; });
  CHECK(t == doctest::Approx(10.1).epsilon(1e-3));
  CHECK(ex.state().phase == ExecPhase::Dive);
}

TEST_CASE("site missions visit every line") {
  Executor ex;
  const auto site = plan::plan_site(kHome, 3, 30.0, 10.0, Heading(0), DepthRef::depth(2.0), kNoLeadIn);
  ex.start(site, surface_at(site.lines[0].start, 0.0), 0.0);
  double t = 0.0;
  std::vector<int> dove_on;
  for (int k = 0; k < 3; ++k) {
    if (ex.state().phase == ExecPhase::TransitToNextLine) {
      t += 0.1;
      ex.tick(surface_at(site.lines[k].start, t), t);
    }
    REQUIRE(ex.state().phase == ExecPhase::Dive);
    dove_on.push_back(ex.state().line_index);
    t = run_until(ex, t, [&](double now) { return submerged(2.0, now); },
                  [&] { return ex.state().phase == ExecPhase::Ascend; });
    t += 0.1;
    ex.tick(surface_at(geo::destination(site.lines[k].start, site.lines[k].heading, 30.0), t), t);
  }
  CHECK(dove_on == std::vector<int>{0, 1, 2});
  CHECK(ex.state().phase == ExecPhase::ReturnTransit);
}

TEST_CASE("circle mission runs its duration with feed-forward") {
  Executor ex;
  const auto c = plan::plan_circle(kHome, 20.0, 1.0, DepthRef::depth(2.0), 0.0, 60.0, plan::Direction::CW);
  const auto entry = geo::from_local(kHome, {20.0, 0.0});
  ex.start(c, surface_at(entry, 0.0), 0.0);
  CHECK(ex.state().phase == ExecPhase::Dive);
  CHECK(std::abs(geo::wrap_angle_error(ex.state().refs.heading, Heading(180))) < 1e-6);
  double t = run_until(ex, 0.0, [&](double now) { return submerged(2.0, now, 180); },
                       [&] { return ex.state().phase != ExecPhase::Dive; });
  CHECK(ex.state().phase == ExecPhase::RunCircle);
  const double start = t;
  t += 0.1;
  const auto out = ex.tick(submerged(2.0, t, 180), t);
  CHECK(out.yaw_rate_ff == doctest::Approx(c.feedforward_yaw_rate()));
  t = run_until(ex, t, [&](double now) { return submerged(2.0, now); },
                [&] { return ex.state().phase != ExecPhase::RunCircle; });
  CHECK(t - start == doctest::Approx(60.0).epsilon(0.002));
}

TEST_CASE("dive capture gives up after the dive timeout") {
  Executor ex;
  ex.start(line_here(), surface_at(kHome, 0.0), 0.0);
  bool noted = false;
  double t = 0.0;
  while (ex.state().phase == ExecPhase::Dive && t < 200.0) {
    t += 0.1;
    const auto out = ex.tick(submerged(0.5, t), t);
    for (const auto& n : out.notes) noted = noted || n == "dive-capture-timeout";
  }
  CHECK(noted);
  CHECK(t == doctest::Approx(120.0).epsilon(1e-3));
}

TEST_CASE("abort while submerged ascends then aborts") {
  Executor ex;
  ex.start(line_here(), surface_at(kHome, 0.0), 0.0);
  ex.tick(submerged(1.0, 0.1), 0.1);
  ex.request_abort(0.1);
  CHECK(ex.state().phase == ExecPhase::Ascend);
  ex.tick(submerged(0.5, 0.2), 0.2);
  CHECK(ex.state().phase == ExecPhase::Ascend);
  CHECK(ex.state().refs.depth_ref == DepthRef::surface());
  ex.tick(surface_at(kHome, 0.3), 0.3);
  CHECK(ex.state().phase == ExecPhase::Aborted);
  CHECK(error_code([&] { ex.request_abort(0.4); }) == ErrorCode::InvalidState);
}

TEST_CASE("abort at the surface is immediate") {
  Executor ex;
  const auto far = plan::plan_line(geo::from_local(kHome, {0, 200}), Heading(0), 20, DepthRef::depth(2), kHome);
  ex.start(far, surface_at(kHome, 0.0), 0.0);
  REQUIRE(ex.state().phase == ExecPhase::TransitToNextLine);
  ex.request_abort(0.0);
  CHECK(ex.state().phase == ExecPhase::Aborted);
}

TEST_CASE("loiter needs the surface and holds within its radius") {
  Executor ex;
  CHECK(error_code([&] { ex.request_abort(0.0); }) == ErrorCode::InvalidState);
  const auto far = plan::plan_line(geo::from_local(kHome, {0, 200}), Heading(0), 20, DepthRef::depth(2), kHome);
  ex.start(far, surface_at(kHome, 0.0), 0.0);
  ex.command_loiter(surface_at(kHome, 0.1), 0.1);
  CHECK(ex.state().phase == ExecPhase::Loiter);
  ex.tick(surface_at(geo::from_local(kHome, {8, 0}), 0.2), 0.2);
  CHECK(ex.state().target_speed == 0.0);
  ex.tick(surface_at(geo::from_local(kHome, {11, 0}), 0.3), 0.3);
  CHECK(ex.state().target_speed > 0.0);
  CHECK(std::abs(geo::wrap_angle_error(ex.state().refs.heading, Heading(270))) < 1e-6);
  // Keeps approaching until inside the arrival radius.
  ex.tick(surface_at(geo::from_local(kHome, {7, 0}), 0.4), 0.4);
  CHECK(ex.state().target_speed > 0.0);
  ex.tick(surface_at(geo::from_local(kHome, {2, 0}), 0.5), 0.5);
  CHECK(ex.state().target_speed == 0.0);

  Executor diving;
  diving.start(line_here(), surface_at(kHome, 0.0), 0.0);
  CHECK(error_code([&] { diving.command_loiter(submerged(1.0, 0.1), 0.1); }) == ErrorCode::NotAtSurface);
  CHECK(error_code([&] { diving.command_loiter(surface_at(kHome, 0.1), 0.1); }) == ErrorCode::NotAtSurface);
}

TEST_CASE("unreachable rendezvous falls back to loiter") {
  Executor ex;
  ex.start(line_here(5.0), surface_at(kHome, 0.0), 0.0);
  double t = run_until(ex, 0.0, [&](double now) { return submerged(2.0, now); },
                       [&] { return ex.state().phase == ExecPhase::Ascend; });
  const auto stuck = geo::from_local(kHome, {30.0, 0.0});
  t += 0.1;
  ex.tick(surface_at(stuck, t), t);
  REQUIRE(ex.state().phase == ExecPhase::ReturnTransit);
  const double began = t;
  bool noted = false;
  while (ex.state().phase == ExecPhase::ReturnTransit) {
    t += 0.1;
    for (const auto& n : ex.tick(surface_at(stuck, t), t).notes) noted = noted || n == "rendezvous-unreachable";
  }
  CHECK(noted);
  CHECK(ex.state().phase == ExecPhase::Loiter);
  // 30 m at 1 m/s is 30 s expected, so the 60 s floor applies.
  CHECK(t - began == doctest::Approx(60.0).epsilon(0.003));
}

TEST_CASE("pausing freezes phase progress") {
  Executor ex;
  ex.start(line_here(10.0), surface_at(kHome, 0.0), 0.0);
  double t = run_until(ex, 0.0, [&](double now) { return submerged(2.0, now); },
                       [&] { return ex.state().phase == ExecPhase::RunLine; });
  for (int i = 0; i < 30; ++i) {
    t += 0.1;
    ex.tick(submerged(2.0, t), t);
  }
  const auto before = ex.state();
  for (int i = 0; i < 100; ++i) {
    t += 0.1;
    ex.tick(submerged(2.0, t), t, true);
  }
  CHECK(ex.state().phase == ExecPhase::RunLine);
  CHECK(ex.state().run_elapsed == before.run_elapsed);
  CHECK(*ex.state().remaining_timeout() == doctest::Approx(7.0).epsilon(1e-6));
  t += 0.1;
  ex.tick(submerged(2.0, t), t);
  CHECK(*ex.state().remaining_timeout() == doctest::Approx(6.9).epsilon(1e-6));
}

TEST_CASE("shift_timers moves wall-clock anchors") {
  ExecState s;
  s.phase_entry_time = 3.0;
  s.transit_deadline = 70.0;
  s.run_elapsed = 4.0;
  s.shift_timers(12.5);
  CHECK(s.phase_entry_time == 15.5);
  CHECK(s.transit_deadline == 82.5);
  CHECK(s.run_elapsed == 4.0);
}

TEST_CASE("request_end ascends and heads home") {
  Executor ex;
  const auto site = plan::plan_site(kHome, 3, 30.0, 10.0, Heading(0), DepthRef::depth(2.0), kNoLeadIn);
  ex.start(site, surface_at(site.lines[0].start, 0.0), 0.0);
  ex.tick(submerged(1.0, 0.1), 0.1);
  ex.request_end(0.1);
  CHECK(ex.state().phase == ExecPhase::Ascend);
  ex.tick(surface_at(site.lines[0].start, 0.2), 0.2);
  CHECK(ex.state().phase == ExecPhase::ReturnTransit);
  CHECK(ex.state().line_index == 0);
}

TEST_CASE("in-flight start goes straight to dive when submerged") {
  Executor ex;
  ex.start(line_here(), surface_at(kHome, 0.0), 0.0);
  ex.tick(submerged(2.0, 0.1), 0.1);
  const auto c = plan::plan_circle(kHome, 30.0, 1.0, DepthRef::depth(3.0), 0.0, 60.0, plan::Direction::CCW);
  ex.start_inflight(c, submerged(2.0, 0.2), 0.2);
  CHECK(ex.state().phase == ExecPhase::Dive);
  CHECK(ex.state().refs.depth_ref == DepthRef::depth(3.0));
}

}  // TEST_SUITE
