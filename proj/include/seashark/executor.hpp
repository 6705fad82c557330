#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seashark/control.hpp"
#include "seashark/envsim.hpp"
#include "seashark/mission_plan.hpp"

namespace seashark::exec {

using control::NavReference;
using geo::GeoPoint;
using geo::Heading;
using plan::MissionPlan;

enum class ExecPhase {
  Idle,
  LeadIn,
  Dive,
  RunLine,
  RunCircle,
  Ascend,
  ReturnTransit,
  TransitToNextLine,
  Loiter,
  Complete,
  Aborted,
};

std::string_view to_string(ExecPhase phase);
/// Throws ParseError for unknown names.
ExecPhase phase_from_string(std::string_view name);

/// Dive, RunLine and RunCircle.
bool is_submerged_phase(ExecPhase phase);
/// ReturnTransit, TransitToNextLine, Loiter and Complete.
bool is_surface_phase(ExecPhase phase);
/// A mission occupies the executor (anything but Idle, Complete, Aborted).
bool is_active(ExecPhase phase);

struct ExecConfig {
  double depth_band = 0.3;        // m, Dive capture band
  int capture_ticks = 3;          // consecutive in-band ticks before running
  double arrival_radius = 2.5;    // m
  double loiter_radius = 10.0;    // m
  double give_up_factor = 2.0;    // x expected transit time
  double min_give_up_time = 60.0; // s
  double dive_timeout = 120.0;    // s without capture before running anyway
  double tick_dt = 0.1;
};

struct ExecState {
  ExecPhase phase = ExecPhase::Idle;
  std::optional<MissionPlan> mission;
  int line_index = 0;
  double phase_entry_time = 0.0;
  NavReference refs;
  double target_speed = 0.0;
  double yaw_rate_ff = 0.0;

  double run_elapsed = 0.0;  // run phase progress; frozen while overridden
  double lead_in_elapsed = 0.0;
  int capture_count = 0;
  std::optional<GeoPoint> transit_target;
  double transit_deadline = 0.0;
  std::optional<GeoPoint> loiter_anchor;
  bool loiter_approaching = false;
  bool abort_requested = false;
  bool end_requested = false;
  std::optional<GeoPoint> start_fix;
  double last_tick_time = 0.0;
  bool ticked = false;

  /// Seconds left in the current run phase, if in one.
  std::optional<double> remaining_timeout() const;
  /// Moves wall-clock anchors (phase entry, transit deadline) later by `delta` seconds.
  void shift_timers(double delta);

  friend bool operator==(const ExecState&, const ExecState&) = default;
};

struct TickOutput {
  NavReference ref;
  double target_speed = 0.0;
  double yaw_rate_ff = 0.0;
  std::vector<std::string> notes;
};

class Executor {
 public:
  explicit Executor(ExecConfig config = {}, plan::PlannerDefaults defaults = {});

  const ExecState& state() const { return state_; }
  const ExecConfig& config() const { return config_; }

  /// Throws InvalidPlan (validation violations) or NotAtSurface (no GNSS fix).
  void start(const MissionPlan& mission, const sim::SensorFrame& frame, double now,
             const sim::Environment* env = nullptr);

  /// Starts `mission` from wherever the vehicle is; submerged vehicles skip
  /// straight to Dive. Used by autonomy mission switches.
  void start_inflight(const MissionPlan& mission, const sim::SensorFrame& frame, double now);

  /// Advances the phase logic. While `paused`, phase and timers are frozen and
  /// the held reference is returned.
  TickOutput tick(const sim::SensorFrame& frame, double now, bool paused = false);

  /// Submerged phases ascend first; surface phases abort at once. Throws
  /// InvalidState when no mission is active.
  void request_abort(double now);

  /// Ends the mission normally: ascend if needed, then return to rendezvous.
  void request_end(double now);

  /// Throws NotAtSurface without a GNSS fix or during submerged phases.
  void command_loiter(const sim::SensorFrame& frame, double now);

  /// Replaces the whole state; used to restore a snapshot.
  void restore(const ExecState& snapshot) { state_ = snapshot; }
  void shift_timers(double delta) { state_.shift_timers(delta); }

 private:
  void enter(ExecPhase phase, double now);
  void begin_segment(const sim::SensorFrame& frame, double now);
  void begin_transit(ExecPhase phase, const GeoPoint& target, const GeoPoint& from, double now);
  void after_surfacing(const sim::SensorFrame& frame, double now, TickOutput& out);
  void surface_steer(const sim::SensorFrame& frame, double now);
  double assumed_speed() const;
  const plan::LineMission* current_line() const;
  GeoPoint lead_in_point(const plan::LineMission& line) const;
  GeoPoint circle_entry(const plan::CircleMission& c, const GeoPoint& from) const;
  Heading circle_tangent(const plan::CircleMission& c, const GeoPoint& on_circle) const;
  plan::DepthRef run_depth_ref() const;

  ExecConfig config_;
  plan::PlannerDefaults defaults_;
  ExecState state_;
};

}  // namespace seashark::exec
