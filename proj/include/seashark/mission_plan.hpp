#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seashark/envsim.hpp"
#include "seashark/geodesy.hpp"

namespace seashark::plan {

using geo::GeoPoint;
using geo::Heading;

enum class DepthMode { Depth, Altitude };

/// Vertical reference. Planned missions require value > 0; surface phases use
/// DepthRef::surface() (Depth 0).
struct DepthRef {
  DepthMode mode = DepthMode::Depth;
  double value = 0.0;

  static DepthRef depth(double m) { return {DepthMode::Depth, m}; }
  static DepthRef altitude(double m) { return {DepthMode::Altitude, m}; }
  static DepthRef surface() { return {DepthMode::Depth, 0.0}; }

  friend bool operator==(const DepthRef&, const DepthRef&) = default;
};

/// The run starts at `start`; a non-zero lead-in is a surface run-up of
/// `lead_in` meters ending there.
struct LineMission {
  GeoPoint start;
  Heading heading;
  double timeout = 0.0;
  DepthRef depth_ref;
  GeoPoint rendezvous;
  double lead_in = 0.0;
  double assumed_speed = 1.0;

  friend bool operator==(const LineMission&, const LineMission&) = default;
};

struct SiteMission {
  GeoPoint center;
  int num_lines = 1;
  double line_length = 0.0;
  double spacing = 0.0;
  Heading orientation;
  DepthRef depth_ref;
  double assumed_speed = 1.0;
  double lead_in = 10.0;
  std::vector<LineMission> lines;  // derived

  friend bool operator==(const SiteMission&, const SiteMission&) = default;
};

enum class Direction { CW, CCW };

struct CircleMission {
  GeoPoint center;
  double radius = 0.0;
  double speed = 0.0;
  DepthRef depth_ref;
  double spiral_rate = 0.0;  // m/s added to the vertical reference, 0 = fixed depth
  double duration = 0.0;
  Direction direction = Direction::CW;

  /// Signed yaw rate that traces the circle, deg/s (positive clockwise).
  double feedforward_yaw_rate() const;

  friend bool operator==(const CircleMission&, const CircleMission&) = default;
};

using MissionPlan = std::variant<LineMission, SiteMission, CircleMission>;

struct PlannerDefaults {
  double lead_in = 10.0;
  double assumed_speed = 1.0;
  double max_yaw_rate = 30.0;  // deg/s
  double max_speed = 1.5;
};

LineMission plan_line(const GeoPoint& start, Heading heading, double timeout, const DepthRef& depth_ref,
                      std::optional<GeoPoint> rendezvous = std::nullopt, double assumed_speed = 1.0);

SiteMission plan_site(const GeoPoint& center, int num_lines, double line_length, double spacing,
                      Heading orientation, const DepthRef& depth_ref, const PlannerDefaults& defaults = {});

CircleMission plan_circle(const GeoPoint& center, double radius, double speed, const DepthRef& depth_ref,
                          double spiral_rate, double duration, Direction direction,
                          const PlannerDefaults& defaults = {});

/// End point of the underwater run of a line, assuming no drift.
GeoPoint line_end(const LineMission& line);

struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks plan invariants and, with a grid, that Depth-mode references stay
/// above the seabed along the planned track. Never throws.
std::vector<Violation> validate(const MissionPlan& plan, const sim::Environment* env = nullptr,
                                const PlannerDefaults& defaults = {});

std::string_view type_name(const MissionPlan& plan);

/// Canonical structured-text document with stable key order.
std::string to_document(const MissionPlan& plan);
/// Throws ParseError on malformed input. Site lines are taken from the
/// document verbatim when present, otherwise re-derived.
MissionPlan from_document(std::string_view text);

}  // namespace seashark::plan
