#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "seashark/autonomy.hpp"
#include "seashark/config.hpp"
#include "seashark/control.hpp"
#include "seashark/envsim.hpp"
#include "seashark/executor.hpp"
#include "seashark/mission_log.hpp"
#include "seashark/navigation.hpp"

namespace seashark {

/// A mission log shared between the loop (single writer) and query readers.
class SharedLog {
 public:
  explicit SharedLog(mlog::MissionLog log) : log_(std::move(log)) {}

  void append(mlog::LogRecord record);
  void finalize();
  void attach_file(const std::string& path);

  /// Runs `fn(const MissionLog&)` under a shared lock.
  template <typename F>
  auto read(F&& fn) const {
    std::shared_lock lock(mu_);
    return fn(log_);
  }

  /// Copy of the log as of now.
  mlog::MissionLog snapshot() const;

 private:
  mutable std::shared_mutex mu_;
  mlog::MissionLog log_;
};

struct TickResult {
  mlog::LogRecord record;  // always filled; appended only when `logged`
  bool logged = false;
  bool connected = false;  // vehicle at the surface
  std::vector<autonomy::TriggeredAction> triggered;
};

/// One simulated vehicle with its frontseat: sense, navigate, arbitrate,
/// execute, control, log, actuate. Not thread-safe; the owner serializes calls.
class ControlLoop {
 public:
  explicit ControlLoop(StationConfig config);

  const StationConfig& config() const { return config_; }
  const sim::Simulator& simulator() const { return sim_; }
  const exec::Executor& executor() const { return executor_; }
  double now() const { return sim_.state().sim_time; }
  sim::SensorFrame current_frame() const { return sim_.sense(); }
  bool mission_active() const { return exec::is_active(executor_.state().phase); }
  const std::optional<control::NavReference>& backseat_ref() const { return backseat_; }
  std::shared_ptr<SharedLog> current_log() const { return log_; }

  /// Starts `plan` from the vehicle's current pose. Throws InvalidState while a
  /// mission runs, InvalidPlan, or NotAtSurface.
  std::shared_ptr<SharedLog> launch(const plan::MissionPlan& plan, const std::string& mission_id);
  /// Throws InvalidState without an active mission.
  void abort();
  /// Throws InvalidState without an active mission, NotAtSurface while submerged.
  void loiter();

  /// Thread-safe; sampled at the next tick.
  void push_backseat(autonomy::BackseatMessage msg) { inbox_.push(std::move(msg)); }

  /// Installs event rules and the plans they may switch to. Throws InvalidParams.
  void set_rules(std::vector<autonomy::EventRule> rules, std::map<std::string, plan::MissionPlan> plans);
  /// Applies one action right away, as if a rule had fired this tick.
  void apply_action(const autonomy::EventAction& action, std::vector<std::string>* notes = nullptr);

  /// Swaps tunables while idle. Pose and clock carry over.
  void reconfigure(StationConfig config);

  TickResult tick();

 private:
  struct Suspended {
    exec::ExecState state;
    double at = 0.0;
  };

  void end_override(double now);
  void clear_overrides();

  StationConfig config_;
  sim::Simulator sim_;
  exec::Executor executor_;
  nav::Navigator navigator_;
  control::HeadingController heading_ctl_;
  control::VerticalController vertical_ctl_;
  autonomy::BackseatInbox inbox_;
  std::optional<control::NavReference> backseat_;
  std::optional<double> paused_since_;
  std::vector<autonomy::EventRule> rules_;
  std::vector<autonomy::RuleState> rule_state_;
  std::map<std::string, plan::MissionPlan> plans_;
  std::vector<Suspended> suspended_;
  std::shared_ptr<SharedLog> log_;
  double last_speed_cmd_ = 0.0;
  bool altitude_fallback_ = false;
};

}  // namespace seashark
