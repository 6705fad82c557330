#pragma once

#include <optional>

#include "seashark/envsim.hpp"
#include "seashark/mission_plan.hpp"

namespace seashark::control {

using geo::Heading;
using plan::DepthRef;

enum class RefSource { Mission, Backseat };

struct NavReference {
  Heading heading;
  DepthRef depth_ref;
  RefSource source = RefSource::Mission;
  double issued_at = 0.0;

  friend bool operator==(const NavReference&, const NavReference&) = default;
};

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integrator_limit = 0.0;  // bound on |integral of error|
};

struct ControllerGains {
  PidGains heading{1.2, 0.02, 0.3, 10.0};   // deg -> deg/s
  PidGains vertical{0.5, 0.01, 0.1, 5.0};   // m -> m/s

  /// Throws InvalidParams for negative gains or limits.
  void validate() const;
};

/// Heading PID on the wrapped error. Output in deg/s, saturated at max_yaw_rate.
class HeadingController {
 public:
  HeadingController(PidGains gains, double max_yaw_rate) : gains_(gains), max_rate_(max_yaw_rate) {}

  double update(Heading reference, Heading measured, double dt);
  void reset();
  double integrator() const { return integral_; }

 private:
  PidGains gains_;
  double max_rate_;
  double integral_ = 0.0;
  std::optional<double> prev_error_;
};

struct VerticalCommand {
  double vertical_rate = 0.0;
  bool altitude_fallback = false;  // altimeter had no return, holding depth instead
};

/// Vertical PID; positive output increases depth. In Altitude mode a missing
/// altimeter return latches a hold on the depth measured at that moment.
class VerticalController {
 public:
  VerticalController(PidGains gains, double max_vr) : gains_(gains), max_vr_(max_vr) {}

  VerticalCommand update(const DepthRef& reference, const sim::SensorFrame& frame, double dt);
  void reset();

 private:
  PidGains gains_;
  double max_vr_;
  double integral_ = 0.0;
  std::optional<double> prev_error_;
  std::optional<double> hold_depth_;
};

/// Backseat wins iff present and now - issued_at <= stale_timeout.
NavReference arbitrate(const NavReference& mission_ref, const std::optional<NavReference>& backseat_ref,
                       double now, double stale_timeout);

bool is_fresh(const std::optional<NavReference>& backseat_ref, double now, double stale_timeout);

}  // namespace seashark::control
