#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seashark/envsim.hpp"
#include "seashark/geodesy.hpp"

namespace seashark::nav {

using geo::GeoPoint;
using geo::Heading;
using geo::LocalOffset;

enum class NavSource { DeadReckoned, GnssFix };

std::string_view to_string(NavSource source);
NavSource nav_source_from_string(std::string_view name);

struct NavEstimate {
  double sim_time = 0.0;
  GeoPoint position;
  NavSource source = NavSource::DeadReckoned;
  Heading heading_used;
  double speed_used = 0.0;

  friend bool operator==(const NavEstimate&, const NavEstimate&) = default;
};

/// Estimates ordered by strictly increasing sim_time.
using Track = std::vector<NavEstimate>;

/// Throws TimeOrderViolation unless times strictly increase.
void check_monotonic(const Track& track);

/// Advances `prev` along the compass heading at the assumed speed. There is no
/// drift term: the vehicle cannot measure its velocity over ground.
NavEstimate dead_reckon_step(const NavEstimate& prev, Heading compass, double assumed_speed, double dt);

/// Pins the DR track to `fix_before`, then spreads the closing residual at
/// `fix_after` linearly in time over the segment.
///
/// With t0, t1 the fix times, each point p(t) becomes
///   fix_before + (p(t) - p(first)) + r * (t - t0) / (t1 - t0)
/// where r is the gap between fix_after and the translated last DR point,
/// measured on the tangent plane at fix_before. Under a constant current the
/// result is exact. Throws TimeOrderViolation or DegenerateDuration.
Track reconstruct_track(const Track& dr, const NavEstimate& fix_before, const NavEstimate& fix_after);

struct Drift {
  double east = 0.0;   // m/s
  double north = 0.0;  // m/s

  friend bool operator==(const Drift&, const Drift&) = default;
};

/// Mean drift over the segment: closing residual divided by (t1 - t0).
Drift estimate_drift(const NavEstimate& fix_before, const NavEstimate& fix_after, const Track& dr);

/// Online estimator run by the control loop: GNSS when available, otherwise
/// dead reckoning from the previous estimate.
class Navigator {
 public:
  /// `commanded_speed` is the speed command that acted over the last interval.
  NavEstimate update(const sim::SensorFrame& frame, double commanded_speed);
  const std::optional<NavEstimate>& last() const { return last_; }
  void reset() { last_.reset(); }

 private:
  std::optional<NavEstimate> last_;
};

/// `time_s lat lon source` per line, degrees with 6 decimals.
std::string export_track_text(const Track& track);
/// Reads export_track_text output. Throws ParseError.
Track parse_track_text(std::string_view text);
/// KML document with a LineString of lon,lat pairs for earth viewers.
std::string export_geotrack(const Track& track, std::string_view name = "seashark track");

}  // namespace seashark::nav
