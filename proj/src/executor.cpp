#include "seashark/executor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "seashark/error.hpp"

namespace seashark::exec {

using plan::CircleMission;
using plan::DepthRef;
using plan::LineMission;
using plan::SiteMission;

namespace {

constexpr std::array<std::pair<ExecPhase, std::string_view>, 11> kPhaseNames{{
    {ExecPhase::Idle, "Idle"},
    {ExecPhase::LeadIn, "LeadIn"},
    {ExecPhase::Dive, "Dive"},
    {ExecPhase::RunLine, "RunLine"},
    {ExecPhase::RunCircle, "RunCircle"},
    {ExecPhase::Ascend, "Ascend"},
    {ExecPhase::ReturnTransit, "ReturnTransit"},
    {ExecPhase::TransitToNextLine, "TransitToNextLine"},
    {ExecPhase::Loiter, "Loiter"},
    {ExecPhase::Complete, "Complete"},
    {ExecPhase::Aborted, "Aborted"},
}};

constexpr double kTimeEps = 1e-9;

}  // namespace

std::string_view to_string(ExecPhase phase) {
  for (const auto& [p, name] : kPhaseNames) {
    if (p == phase) return name;
  }
  return "Idle";
}

ExecPhase phase_from_string(std::string_view name) {
  for (const auto& [p, n] : kPhaseNames) {
    if (n == name) return p;
  }
  throw Error(ErrorCode::ParseError, "unknown phase " + std::string(name));
}

bool is_submerged_phase(ExecPhase phase) {
  return phase == ExecPhase::Dive || phase == ExecPhase::RunLine || phase == ExecPhase::RunCircle;
}

bool is_surface_phase(ExecPhase phase) {
  return phase == ExecPhase::ReturnTransit || phase == ExecPhase::TransitToNextLine ||
         phase == ExecPhase::Loiter || phase == ExecPhase::Complete;
}

bool is_active(ExecPhase phase) {
  return phase != ExecPhase::Idle && phase != ExecPhase::Complete && phase != ExecPhase::Aborted;
}

std::optional<double> ExecState::remaining_timeout() const {
  if (!mission) return std::nullopt;
  if (phase == ExecPhase::RunLine) {
    if (const auto* l = std::get_if<LineMission>(&*mission)) return l->timeout - run_elapsed;
    if (const auto* s = std::get_if<SiteMission>(&*mission)) {
      return s->lines.at(line_index).timeout - run_elapsed;
    }
  }
  if (phase == ExecPhase::RunCircle) {
    if (const auto* c = std::get_if<CircleMission>(&*mission)) return c->duration - run_elapsed;
  }
  return std::nullopt;
}

void ExecState::shift_timers(double delta) {
  phase_entry_time += delta;
  transit_deadline += delta;
}

Executor::Executor(ExecConfig config, plan::PlannerDefaults defaults)
    : config_(config), defaults_(defaults) {}

double Executor::assumed_speed() const {
  if (!state_.mission) return 0.0;
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CircleMission>) {
          return m.speed;
        } else {
          return m.assumed_speed;
        }
      },
      *state_.mission);
}

const LineMission* Executor::current_line() const {
  if (!state_.mission) return nullptr;
  if (const auto* l = std::get_if<LineMission>(&*state_.mission)) return l;
  if (const auto* s = std::get_if<SiteMission>(&*state_.mission)) {
    return &s->lines.at(static_cast<size_t>(state_.line_index));
  }
  return nullptr;
}

GeoPoint Executor::lead_in_point(const LineMission& line) const {
  return geo::destination(line.start, Heading(line.heading.degrees() + 180.0), line.lead_in);
}

GeoPoint Executor::circle_entry(const CircleMission& c, const GeoPoint& from) const {
  const Heading radial = geo::distance_m(c.center, from) > 1e-3 ? geo::bearing_deg(c.center, from) : Heading(0.0);
  return geo::destination(c.center, radial, c.radius);
}

Heading Executor::circle_tangent(const CircleMission& c, const GeoPoint& on_circle) const {
  const Heading radial =
      geo::distance_m(c.center, on_circle) > 1e-3 ? geo::bearing_deg(c.center, on_circle) : Heading(0.0);
  return Heading(radial.degrees() + (c.direction == plan::Direction::CW ? 90.0 : -90.0));
}

DepthRef Executor::run_depth_ref() const {
  if (!state_.mission) return DepthRef::surface();
  if (const auto* c = std::get_if<CircleMission>(&*state_.mission)) {
    DepthRef r = c->depth_ref;
    if (state_.phase == ExecPhase::RunCircle && c->spiral_rate > 0.0) {
      const double delta = c->spiral_rate * state_.run_elapsed;
      r.value = r.mode == plan::DepthMode::Depth ? r.value + delta : std::max(0.0, r.value - delta);
    }
    return r;
  }
  if (const auto* l = current_line()) return l->depth_ref;
  return DepthRef::surface();
}

void Executor::enter(ExecPhase phase, double now) {
  state_.phase = phase;
  state_.phase_entry_time = now;
  state_.capture_count = 0;
  if (phase == ExecPhase::RunLine || phase == ExecPhase::RunCircle) state_.run_elapsed = 0.0;
  if (phase == ExecPhase::LeadIn) state_.lead_in_elapsed = 0.0;
}

void Executor::begin_transit(ExecPhase phase, const GeoPoint& target, const GeoPoint& from, double now) {
  enter(phase, now);
  state_.transit_target = target;
  const double speed = std::max(assumed_speed(), 0.1);
  const double expected = geo::distance_m(from, target) / speed;
  state_.transit_deadline = now + std::max(config_.min_give_up_time, config_.give_up_factor * expected);
}

// Decides how to reach the start of the current line or circle from the surface.
void Executor::begin_segment(const sim::SensorFrame& frame, double now) {
  const GeoPoint here = *frame.gnss;
  if (const auto* c = std::get_if<CircleMission>(&*state_.mission)) {
    const GeoPoint entry = circle_entry(*c, here);
    if (geo::distance_m(here, entry) > config_.arrival_radius) {
      begin_transit(ExecPhase::TransitToNextLine, entry, here, now);
      return;
    }
    enter(ExecPhase::Dive, now);
    state_.refs.heading = circle_tangent(*c, here);
    return;
  }
  const LineMission& line = *current_line();
  const GeoPoint target = lead_in_point(line);
  if (geo::distance_m(here, target) > config_.arrival_radius) {
    begin_transit(ExecPhase::TransitToNextLine, target, here, now);
    return;
  }
  state_.refs.heading = line.heading;
  enter(line.lead_in > 0.0 ? ExecPhase::LeadIn : ExecPhase::Dive, now);
}

void Executor::start(const MissionPlan& mission, const sim::SensorFrame& frame, double now,
                     const sim::Environment* env) {
  const auto violations = plan::validate(mission, env, defaults_);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidPlan, violations.front().field + ": " + violations.front().message);
  }
  if (!frame.gnss) throw Error(ErrorCode::NotAtSurface, "mission start requires a GNSS fix");
  state_ = ExecState{};
  state_.mission = mission;
  state_.start_fix = frame.gnss;
  state_.last_tick_time = now;
  state_.refs = NavReference{frame.compass, DepthRef::surface(), control::RefSource::Mission, now};
  state_.target_speed = assumed_speed();
  begin_segment(frame, now);
}

void Executor::start_inflight(const MissionPlan& mission, const sim::SensorFrame& frame, double now) {
  if (frame.gnss) {
    ExecState keep = state_;
    try {
      start(mission, frame, now);
    } catch (...) {
      state_ = keep;
      throw;
    }
    return;
  }
  const auto violations = plan::validate(mission, nullptr, defaults_);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidPlan, violations.front().field + ": " + violations.front().message);
  }
  const double last = state_.last_tick_time;
  const bool ticked = state_.ticked;
  state_ = ExecState{};
  state_.mission = mission;
  state_.last_tick_time = last;
  state_.ticked = ticked;
  state_.target_speed = assumed_speed();
  state_.refs = NavReference{frame.compass, run_depth_ref(), control::RefSource::Mission, now};
  if (const auto* l = current_line()) state_.refs.heading = l->heading;
  enter(ExecPhase::Dive, now);
}

void Executor::request_abort(double now) {
  if (!is_active(state_.phase)) throw Error(ErrorCode::InvalidState, "no active mission to abort");
  if (is_submerged_phase(state_.phase) || state_.phase == ExecPhase::Ascend) {
    state_.abort_requested = true;
    if (state_.phase != ExecPhase::Ascend) enter(ExecPhase::Ascend, now);
  } else {
    enter(ExecPhase::Aborted, now);
  }
}

void Executor::request_end(double now) {
  if (!is_active(state_.phase)) return;
  state_.end_requested = true;
  if (is_submerged_phase(state_.phase)) enter(ExecPhase::Ascend, now);
}

void Executor::command_loiter(const sim::SensorFrame& frame, double now) {
  if (!frame.gnss || is_submerged_phase(state_.phase) || state_.phase == ExecPhase::Ascend) {
    throw Error(ErrorCode::NotAtSurface, "loiter requires the vehicle at the surface");
  }
  enter(ExecPhase::Loiter, now);
  state_.loiter_anchor = frame.gnss;
  state_.loiter_approaching = false;
  state_.transit_target.reset();
}

void Executor::surface_steer(const sim::SensorFrame& frame, double now) {
  (void)now;
  state_.refs.depth_ref = DepthRef::surface();
  if (frame.gnss && state_.transit_target && geo::distance_m(*frame.gnss, *state_.transit_target) > 1e-6) {
    state_.refs.heading = geo::bearing_deg(*frame.gnss, *state_.transit_target);
  }
}

void Executor::after_surfacing(const sim::SensorFrame& frame, double now, TickOutput& out) {
  (void)out;
  const GeoPoint here = *frame.gnss;
  if (state_.abort_requested) {
    enter(ExecPhase::Aborted, now);
    return;
  }
  if (!state_.end_requested) {
    if (const auto* s = std::get_if<SiteMission>(&*state_.mission)) {
      if (state_.line_index + 1 < static_cast<int>(s->lines.size())) {
        state_.line_index += 1;
        begin_transit(ExecPhase::TransitToNextLine, lead_in_point(s->lines[state_.line_index]), here, now);
        return;
      }
    }
  }
  GeoPoint rendezvous = state_.start_fix.value_or(here);
  if (const auto* l = current_line()) rendezvous = l->rendezvous;
  begin_transit(ExecPhase::ReturnTransit, rendezvous, here, now);
}

TickOutput Executor::tick(const sim::SensorFrame& frame, double now, bool paused) {
  const double dt = state_.ticked ? now - state_.last_tick_time : config_.tick_dt;
  state_.last_tick_time = now;
  state_.ticked = true;

  TickOutput out;
  const double cruise = assumed_speed();

  if (!paused) {
    switch (state_.phase) {
      case ExecPhase::Idle:
      case ExecPhase::Complete:
      case ExecPhase::Aborted:
        state_.refs.heading = frame.compass;
        state_.refs.depth_ref = DepthRef::surface();
        state_.target_speed = 0.0;
        break;

      case ExecPhase::LeadIn: {
        state_.refs.depth_ref = DepthRef::surface();
        state_.target_speed = cruise;
        const LineMission* line = current_line();
        state_.lead_in_elapsed += dt;
        if (line == nullptr || state_.lead_in_elapsed + kTimeEps >= line->lead_in / cruise) {
          enter(ExecPhase::Dive, now);
          state_.refs.depth_ref = run_depth_ref();
        }
        break;
      }

      case ExecPhase::Dive: {
        state_.target_speed = cruise;
        const DepthRef target = run_depth_ref();
        state_.refs.depth_ref = target;
        bool in_band = false;
        if (target.mode == plan::DepthMode::Depth) {
          in_band = std::abs(frame.depth - target.value) <= config_.depth_band;
        } else if (frame.altitude) {
          in_band = std::abs(*frame.altitude - target.value) <= config_.depth_band;
        }
        if (const auto* c = std::get_if<CircleMission>(&*state_.mission)) {
          state_.refs.heading = Heading(state_.refs.heading.degrees() + c->feedforward_yaw_rate() * dt);
        }
        state_.capture_count = in_band ? state_.capture_count + 1 : 0;
        const bool timed_out = now - state_.phase_entry_time >= config_.dive_timeout;
        if (state_.capture_count >= config_.capture_ticks || timed_out) {
          if (timed_out) out.notes.emplace_back("dive-capture-timeout");
          const bool circle = std::holds_alternative<CircleMission>(*state_.mission);
          enter(circle ? ExecPhase::RunCircle : ExecPhase::RunLine, now);
        }
        break;
      }

      case ExecPhase::RunLine: {
        state_.target_speed = cruise;
        const LineMission* line = current_line();
        state_.refs.heading = line->heading;
        state_.refs.depth_ref = line->depth_ref;
        state_.run_elapsed += dt;
        if (state_.run_elapsed + kTimeEps >= line->timeout) enter(ExecPhase::Ascend, now);
        break;
      }

      case ExecPhase::RunCircle: {
        const auto& c = std::get<CircleMission>(*state_.mission);
        state_.target_speed = cruise;
        state_.run_elapsed += dt;
        state_.refs.heading = Heading(state_.refs.heading.degrees() + c.feedforward_yaw_rate() * dt);
        state_.refs.depth_ref = run_depth_ref();
        if (state_.run_elapsed + kTimeEps >= c.duration) enter(ExecPhase::Ascend, now);
        break;
      }

      case ExecPhase::Ascend:
        state_.target_speed = cruise;
        state_.refs.depth_ref = DepthRef::surface();
        if (frame.gnss) after_surfacing(frame, now, out);
        if (state_.phase == ExecPhase::ReturnTransit || state_.phase == ExecPhase::TransitToNextLine) {
          surface_steer(frame, now);
        }
        break;

      case ExecPhase::ReturnTransit:
      case ExecPhase::TransitToNextLine: {
        state_.target_speed = cruise;
        surface_steer(frame, now);
        if (!frame.gnss || !state_.transit_target) break;
        if (geo::distance_m(*frame.gnss, *state_.transit_target) <= config_.arrival_radius) {
          if (state_.phase == ExecPhase::ReturnTransit) {
            enter(ExecPhase::Complete, now);
            state_.target_speed = 0.0;
          } else {
            state_.transit_target.reset();
            begin_segment(frame, now);
            if (state_.phase == ExecPhase::Dive) state_.refs.depth_ref = run_depth_ref();
          }
        } else if (now >= state_.transit_deadline) {
          out.notes.emplace_back(state_.phase == ExecPhase::ReturnTransit ? "rendezvous-unreachable"
                                                                           : "line-start-unreachable");
          state_.loiter_anchor = frame.gnss;
          state_.loiter_approaching = false;
          state_.transit_target.reset();
          enter(ExecPhase::Loiter, now);
          state_.target_speed = 0.0;
        }
        break;
      }

      case ExecPhase::Loiter: {
        state_.refs.depth_ref = DepthRef::surface();
        if (!frame.gnss || !state_.loiter_anchor) {
          state_.target_speed = 0.0;
          break;
        }
        const double dist = geo::distance_m(*frame.gnss, *state_.loiter_anchor);
        if (dist > config_.loiter_radius) state_.loiter_approaching = true;
        if (state_.loiter_approaching && dist <= config_.arrival_radius) state_.loiter_approaching = false;
        if (state_.loiter_approaching) {
          state_.target_speed = cruise > 0.0 ? cruise : 1.0;
          if (dist > 1e-6) state_.refs.heading = geo::bearing_deg(*frame.gnss, *state_.loiter_anchor);
        } else {
          state_.target_speed = 0.0;
        }
        break;
      }
    }
  }

  state_.yaw_rate_ff = 0.0;
  if (state_.phase == ExecPhase::RunCircle ||
      (state_.phase == ExecPhase::Dive && std::holds_alternative<CircleMission>(*state_.mission))) {
    state_.yaw_rate_ff = std::get<CircleMission>(*state_.mission).feedforward_yaw_rate();
  }
  if (!paused) {
    state_.refs.source = control::RefSource::Mission;
    state_.refs.issued_at = now;
  }
  out.ref = state_.refs;
  out.target_speed = state_.target_speed;
  out.yaw_rate_ff = state_.yaw_rate_ff;
  return out;
}

}  // namespace seashark::exec
