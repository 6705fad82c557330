#include "seashark/control.hpp"

#include <algorithm>

#include "seashark/error.hpp"

namespace seashark::control {

namespace {

bool valid(const PidGains& g) {
  return g.kp >= 0.0 && g.ki >= 0.0 && g.kd >= 0.0 && g.integrator_limit >= 0.0;
}

}  // namespace

void ControllerGains::validate() const {
  if (!valid(heading) || !valid(vertical)) {
    throw Error(ErrorCode::InvalidParams, "controller gains and integrator limits must be >= 0");
  }
}

double HeadingController::update(Heading reference, Heading measured, double dt) {
  const double error = geo::wrap_angle_error(reference, measured);
  integral_ = std::clamp(integral_ + error * dt, -gains_.integrator_limit, gains_.integrator_limit);
  const double derivative = prev_error_ ? geo::wrap_degrees(error - *prev_error_) / dt : 0.0;
  prev_error_ = error;
  const double out = gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative;
  return std::clamp(out, -max_rate_, max_rate_);
}

void HeadingController::reset() {
  integral_ = 0.0;
  prev_error_.reset();
}

VerticalCommand VerticalController::update(const DepthRef& reference, const sim::SensorFrame& frame,
                                           double dt) {
  VerticalCommand cmd;
  double error = 0.0;
  if (reference.mode == plan::DepthMode::Depth) {
    hold_depth_.reset();
    error = reference.value - frame.depth;
  } else if (frame.altitude) {
    hold_depth_.reset();
    error = *frame.altitude - reference.value;
  } else {
    if (!hold_depth_) hold_depth_ = frame.depth;
    error = *hold_depth_ - frame.depth;
    cmd.altitude_fallback = true;
  }
  integral_ = std::clamp(integral_ + error * dt, -gains_.integrator_limit, gains_.integrator_limit);
  const double derivative = prev_error_ ? (error - *prev_error_) / dt : 0.0;
  prev_error_ = error;
  cmd.vertical_rate =
      std::clamp(gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative, -max_vr_, max_vr_);
  return cmd;
}

void VerticalController::reset() {
  integral_ = 0.0;
  prev_error_.reset();
  hold_depth_.reset();
}

bool is_fresh(const std::optional<NavReference>& backseat_ref, double now, double stale_timeout) {
  return backseat_ref && (now - backseat_ref->issued_at) <= stale_timeout;
}

NavReference arbitrate(const NavReference& mission_ref, const std::optional<NavReference>& backseat_ref,
                       double now, double stale_timeout) {
  if (is_fresh(backseat_ref, now, stale_timeout)) {
    NavReference r = *backseat_ref;
    r.source = RefSource::Backseat;
    return r;
  }
  NavReference r = mission_ref;
  r.source = RefSource::Mission;
  return r;
}

}  // namespace seashark::control
