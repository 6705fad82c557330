#pragma once

#include <string>
#include <vector>

#include "seashark/autonomy.hpp"
#include "seashark/config.hpp"
#include "seashark/mission_log.hpp"
#include "seashark/mission_plan.hpp"

namespace seashark::autonomy {

/// One leg of the scripted follower: hold heading and depth for `duration` s.
struct FollowLeg {
  Heading heading;
  DepthRef depth_ref;
  double duration = 0.0;
};

/// Stands in for an external backseat script that traces a detected object.
struct FollowPlan {
  std::vector<FollowLeg> legs;
  double timeout = 120.0;          // s after the trigger; then ResumePrevious regardless
  double message_interval = 1.0;   // s between broadcast messages
  std::string session = "ghostnet-follower";
};

struct GhostnetResult {
  mlog::MissionLog log;
  /// Collapsed label sequence over the log: "Circle" for mission-driven
  /// RunCircle ticks, "Follow" for backseat-driven ticks, otherwise the phase name.
  std::vector<std::string> phases;
  double trigger_time = -1.0;  // negative when the rule never fired
  double resume_time = -1.0;
};

/// Circle search until `detect_rule` fires, then follow with backseat refs,
/// then ResumePrevious back to the circle, run to completion. The rule is
/// disarmed after one follow. `max_time` bounds the whole run.
GhostnetResult run_scenario_ghostnet(const StationConfig& config, const plan::CircleMission& initial,
                                     const EventRule& detect_rule, const FollowPlan& follow,
                                     double max_time = 3600.0);

/// The label sequence defined in GhostnetResult::phases.
std::vector<std::string> phase_labels(const mlog::MissionLog& log);

}  // namespace seashark::autonomy
