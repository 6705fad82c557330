#include "seashark/ghostnet.hpp"

#include <cmath>

#include "seashark/control_loop.hpp"
#include "seashark/error.hpp"

namespace seashark::autonomy {

std::vector<std::string> phase_labels(const mlog::MissionLog& log) {
  std::vector<std::string> labels;
  for (const auto& r : log.records()) {
    std::string label;
    if (r.applied.source == control::RefSource::Backseat) {
      label = "Follow";
    } else if (r.phase == exec::ExecPhase::RunCircle) {
      label = "Circle";
    } else {
      label = std::string(exec::to_string(r.phase));
    }
    if (labels.empty() || labels.back() != label) labels.push_back(std::move(label));
  }
  return labels;
}

GhostnetResult run_scenario_ghostnet(const StationConfig& config, const plan::CircleMission& initial,
                                     const EventRule& detect_rule, const FollowPlan& follow, double max_time) {
  ControlLoop loop(config);
  loop.set_rules({detect_rule}, {});
  auto log = loop.launch(initial, "ghostnet");

  GhostnetResult result;
  bool following = false;
  bool done_following = false;
  double next_message = 0.0;

  while (loop.now() <= max_time) {
    const double t = loop.now();
    if (following) {
      const double since = t - result.trigger_time;
      double leg_start = 0.0;
      const FollowLeg* leg = nullptr;
      for (const auto& l : follow.legs) {
        if (since < leg_start + l.duration - 1e-9) {
          leg = &l;
          break;
        }
        leg_start += l.duration;
      }
      if (leg == nullptr || since + 1e-9 >= follow.timeout) {
        loop.apply_action(ResumePrevious{});
        loop.set_rules({}, {});
        following = false;
        done_following = true;
        result.resume_time = t;
      } else if (t + 1e-9 >= next_message) {
        loop.push_backseat(BackseatMessage{leg->heading, leg->depth_ref, t, follow.session});
        next_message = t + follow.message_interval;
      }
    }

    const TickResult tick = loop.tick();
    if (!following && !done_following) {
      for (const auto& trig : tick.triggered) {
        if (trig.rule_id == detect_rule.id) {
          following = true;
          result.trigger_time = tick.record.sim_time;
          next_message = tick.record.sim_time + loop.config().tick_dt;
        }
      }
    }
    const auto phase = loop.executor().state().phase;
    if (phase == exec::ExecPhase::Complete || phase == exec::ExecPhase::Aborted) {
      if (tick.logged) break;
    }
  }
  result.log = log->snapshot();
  result.phases = phase_labels(result.log);
  return result;
}

}  // namespace seashark::autonomy
