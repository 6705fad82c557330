#include "seashark/control_loop.hpp"

#include <filesystem>

#include "seashark/error.hpp"

namespace seashark {

using autonomy::EventAction;
using exec::ExecPhase;

void SharedLog::append(mlog::LogRecord record) {
  std::unique_lock lock(mu_);
  log_.append(std::move(record));
}

void SharedLog::finalize() {
  std::unique_lock lock(mu_);
  log_.finalize();
}

void SharedLog::attach_file(const std::string& path) {
  std::unique_lock lock(mu_);
  log_.attach_file(path);
}

mlog::MissionLog SharedLog::snapshot() const {
  std::shared_lock lock(mu_);
  return log_;
}

ControlLoop::ControlLoop(StationConfig config)
    : config_(std::move(config)),
      sim_(config_.home, config_.env, config_.limits, config_.seed, config_.tick_dt, config_.photo_interval),
      executor_(config_.exec, config_.planner),
      heading_ctl_(config_.gains.heading, config_.limits.max_yaw_rate),
      vertical_ctl_(config_.gains.vertical, config_.limits.max_vr) {
  config_.validate();
}

void ControlLoop::reconfigure(StationConfig config) {
  if (mission_active()) throw Error(ErrorCode::InvalidState, "cannot reconfigure during a mission");
  config.validate();
  if (config.tick_dt != config_.tick_dt) {
    throw Error(ErrorCode::InvalidParams, "tick_dt cannot change on a running station");
  }
  config_ = std::move(config);
  sim_.reconfigure(config_.env, config_.limits);
  executor_ = exec::Executor(config_.exec, config_.planner);
  heading_ctl_ = control::HeadingController(config_.gains.heading, config_.limits.max_yaw_rate);
  vertical_ctl_ = control::VerticalController(config_.gains.vertical, config_.limits.max_vr);
}

std::shared_ptr<SharedLog> ControlLoop::launch(const plan::MissionPlan& plan, const std::string& mission_id) {
  if (mission_active()) throw Error(ErrorCode::InvalidState, "a mission is already running");
  const sim::SensorFrame frame = sim_.sense();
  const sim::Environment* env = &sim_.environment();
  executor_.start(plan, frame, now(), env);

  auto log = std::make_shared<SharedLog>(mlog::MissionLog(mission_id, plan, config_.field_mode));
  if (!config_.log_dir.empty()) {
    std::filesystem::create_directories(config_.log_dir);
    log->attach_file((std::filesystem::path(config_.log_dir) / (mission_id + ".log")).string());
  }
  log_ = log;
  heading_ctl_.reset();
  vertical_ctl_.reset();
  rule_state_.assign(rules_.size(), {});
  altitude_fallback_ = false;
  clear_overrides();
  return log;
}

void ControlLoop::abort() {
  executor_.request_abort(now());
  clear_overrides();
}

void ControlLoop::loiter() {
  if (!mission_active()) throw Error(ErrorCode::InvalidState, "no active mission");
  executor_.command_loiter(sim_.sense(), now());
  clear_overrides();
}

void ControlLoop::clear_overrides() {
  backseat_.reset();
  paused_since_.reset();
  suspended_.clear();
  inbox_.clear();
}

void ControlLoop::set_rules(std::vector<autonomy::EventRule> rules, std::map<std::string, plan::MissionPlan> plans) {
  std::set<std::string> known;
  for (const auto& [id, p] : plans) {
    known.insert(id);
    const auto violations = plan::validate(p, nullptr, config_.planner);
    if (!violations.empty()) {
      throw Error(ErrorCode::InvalidParams, "plan " + id + ": " + violations.front().message);
    }
  }
  autonomy::validate_rules(rules, known);
  rules_ = std::move(rules);
  plans_ = std::move(plans);
  rule_state_.assign(rules_.size(), {});
}

void ControlLoop::end_override(double t) {
  if (paused_since_) {
    executor_.shift_timers(t - *paused_since_);
    paused_since_.reset();
  }
  backseat_.reset();
}

void ControlLoop::apply_action(const EventAction& action, std::vector<std::string>* notes) {
  const double t = now();
  std::vector<std::string> scratch;
  std::vector<std::string>& out = notes ? *notes : scratch;

  if (const auto* sw = std::get_if<autonomy::SwitchMission>(&action)) {
    auto it = plans_.find(sw->plan_id);
    if (it == plans_.end()) throw Error(ErrorCode::UnknownPlan, "unknown plan " + sw->plan_id);
    end_override(t);
    inbox_.clear();
    suspended_.push_back({executor_.state(), t});
    executor_.start_inflight(it->second, sim_.sense(), t);
    heading_ctl_.reset();
    out.push_back("switch-mission:" + sw->plan_id);
  } else if (std::holds_alternative<autonomy::EndMission>(action)) {
    end_override(t);
    inbox_.clear();
    executor_.request_end(t);
    out.emplace_back("end-mission");
  } else if (const auto* set = std::get_if<autonomy::SetRefs>(&action)) {
    control::NavReference ref = set->ref;
    ref.source = control::RefSource::Backseat;
    ref.issued_at = t;
    backseat_ = ref;
    out.emplace_back("set-refs");
  } else {
    end_override(t);
    inbox_.clear();
    if (!suspended_.empty()) {
      Suspended s = std::move(suspended_.back());
      suspended_.pop_back();
      s.state.shift_timers(t - s.at);
      s.state.last_tick_time = executor_.state().last_tick_time;
      s.state.ticked = executor_.state().ticked;
      executor_.restore(s.state);
      heading_ctl_.reset();
    }
    out.emplace_back("resume-previous");
  }
}

TickResult ControlLoop::tick() {
  TickResult result;
  const double t = now();
  const double dt = sim_.tick_dt();
  const sim::SensorFrame frame = sim_.sense();
  std::vector<std::string> notes;

  const nav::NavEstimate estimate = navigator_.update(frame, last_speed_cmd_);
  const bool active = mission_active();

  if (auto msg = inbox_.take_latest()) {
    if (active) {
      const auto ingested = autonomy::ingest_backseat(*msg, executor_.state().refs, t, config_.envelope);
      backseat_ = ingested.ref;
      if (ingested.clamped) notes.emplace_back("backseat-clamped");
    } else {
      notes.emplace_back("backseat-ignored");
    }
  }

  if (active && !rules_.empty()) {
    result.triggered = autonomy::evaluate_events(rules_, frame, rule_state_);
    for (const auto& trig : result.triggered) {
      notes.push_back("rule:" + trig.rule_id);
      apply_action(trig.action, &notes);
      if (std::holds_alternative<autonomy::SwitchMission>(trig.action) ||
          std::holds_alternative<autonomy::EndMission>(trig.action)) {
        break;
      }
    }
  }

  const bool overridden = mission_active() && control::is_fresh(backseat_, t, config_.stale_timeout);
  if (overridden && !paused_since_) {
    paused_since_ = t;
  } else if (!overridden && paused_since_) {
    end_override(t);
    notes.emplace_back("backseat-stale");
  }
  if (!mission_active()) backseat_.reset();

  exec::TickOutput out = executor_.tick(frame, t, overridden);
  const control::NavReference applied =
      overridden ? control::arbitrate(out.ref, backseat_, t, config_.stale_timeout) : out.ref;

  double yaw_rate = heading_ctl_.update(applied.heading, frame.compass, dt);
  if (applied.source == control::RefSource::Mission) yaw_rate += out.yaw_rate_ff;
  const control::VerticalCommand vc = vertical_ctl_.update(applied.depth_ref, frame, dt);
  if (vc.altitude_fallback && !altitude_fallback_) notes.emplace_back("altitude-fallback");
  altitude_fallback_ = vc.altitude_fallback;

  const sim::ActuatorCommand cmd =
      sim::ActuatorCommand{out.target_speed, yaw_rate, vc.vertical_rate}.saturated(config_.limits);

  for (auto& n : out.notes) notes.push_back(std::move(n));
  const exec::ExecState& st = executor_.state();
  mlog::LogRecord& rec = result.record;
  rec.sim_time = t;
  rec.phase = st.phase;
  rec.line_index = st.line_index;
  rec.truth = sim_.state();
  rec.frame = frame;
  rec.applied = applied;
  rec.nav = estimate;
  rec.notes = std::move(notes);
  result.connected = frame.gnss.has_value();

  const bool recording = log_ && !log_->read([](const mlog::MissionLog& l) { return l.finalized(); });
  if (recording && (active || st.phase == ExecPhase::Complete || st.phase == ExecPhase::Aborted)) {
    log_->append(rec);
    result.logged = true;
    if (st.phase == ExecPhase::Complete || st.phase == ExecPhase::Aborted) log_->finalize();
  }

  sim_.advance(cmd);
  last_speed_cmd_ = cmd.target_speed;
  return result;
}

}  // namespace seashark
