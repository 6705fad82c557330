#include "seashark/station.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "seashark/autonomy.hpp"
#include "seashark/error.hpp"
#include "seashark/json_io.hpp"

namespace seashark::station {

namespace {

constexpr size_t kMaxIntervals = 200000;

Error unknown_mission(const std::string& id) { return Error(ErrorCode::UnknownMission, "unknown mission " + id); }

}  // namespace

std::string_view to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::CreatePlan: return "CreatePlan";
    case CommandKind::Validate: return "Validate";
    case CommandKind::Launch: return "Launch";
    case CommandKind::Abort: return "Abort";
    case CommandKind::Loiter: return "Loiter";
    case CommandKind::BackseatMsg: return "BackseatMsg";
    case CommandKind::SetConfig: return "SetConfig";
  }
  return "?";
}

CommandKind command_kind_from_string(std::string_view name) {
  for (auto k : {CommandKind::CreatePlan, CommandKind::Validate, CommandKind::Launch, CommandKind::Abort,
                 CommandKind::Loiter, CommandKind::BackseatMsg, CommandKind::SetConfig}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown command kind " + std::string(name));
}

json ack_to_json(const Ack& a) {
  json j{{"request_id", a.request_id},
         {"seq", a.seq},
         {"applied", a.applied},
         {"kind", std::string(to_string(a.kind))},
         {"ok", a.ok},
         {"sim_time", a.sim_time},
         {"result", a.result}};
  if (!a.ok) {
    j["code"] = a.code;
    j["message"] = a.message;
  }
  return j;
}

std::string_view to_string(Connection c) { return c == Connection::Surface ? "Surface" : "Submerged"; }

json telemetry_to_json(const TelemetryFrame& f) {
  json j{{"tick", f.tick}, {"sim_time", f.sim_time}, {"connection", std::string(to_string(f.connection))}};
  if (f.mission_id) j["mission_id"] = *f.mission_id;
  if (f.record) {
    const auto& r = *f.record;
    j["phase"] = std::string(exec::to_string(r.phase));
    j["line_index"] = r.line_index;
    j["applied"] = io::ref_to_json(r.applied);
    j["frame"] = io::frame_to_json(r.frame);
    j["nav"] = io::nav_to_json(r.nav);
    j["notes"] = r.notes;
  }
  return j;
}

// ---------------------------------------------------------------- Subscription

void Subscription::push(TelemetryFrame frame) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    if (queue_.size() >= capacity_) {
      queue_.pop_front();
      ++dropped_;
    }
    queue_.push_back(std::move(frame));
  }
  cv_.notify_one();
}

std::optional<TelemetryFrame> Subscription::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  TelemetryFrame f = std::move(queue_.front());
  queue_.pop_front();
  ++delivered_;
  return f;
}

void Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::uint64_t Subscription::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

std::uint64_t Subscription::delivered() const {
  std::lock_guard lock(mu_);
  return delivered_;
}

// --------------------------------------------------------------------- Station

Station::Station(StationConfig config) : loop_(config), config_(std::move(config)) {}

Station::~Station() {
  stop();
  drain();
  std::lock_guard lock(subs_mu_);
  for (auto& s : subs_) s->close();
}

std::future<Ack> Station::submit(StationCommand cmd) {
  std::lock_guard lock(queue_mu_);
  Pending p;
  p.seq = next_seq_++;
  if (cmd.request_id.empty()) cmd.request_id = fmt::format("req-{}", p.seq);
  p.cmd = std::move(cmd);
  auto fut = p.promise.get_future();
  queue_.push_back(std::move(p));
  return fut;
}

Ack Station::execute(StationCommand cmd) {
  auto fut = submit(std::move(cmd));
  if (!running()) drain();
  return fut.get();
}

void Station::drain() {
  std::lock_guard step_lock(step_mu_);
  for (;;) {
    Pending p;
    {
      std::lock_guard lock(queue_mu_);
      if (queue_.empty()) break;
      p = std::move(queue_.front());
      queue_.pop_front();
    }
    Ack ack = apply(p.cmd);
    ack.seq = p.seq;
    ack.applied = ++applied_count_;
    p.promise.set_value(std::move(ack));
  }
}

Ack Station::apply(StationCommand& cmd) {
  Ack ack;
  ack.request_id = cmd.request_id;
  ack.kind = cmd.kind;
  ack.sim_time = loop_.now();
  try {
    switch (cmd.kind) {
      case CommandKind::CreatePlan: ack.result = do_create_plan(cmd); break;
      case CommandKind::Validate: ack.result = do_validate(cmd); break;
      case CommandKind::Launch: ack.result = do_launch(cmd); break;
      case CommandKind::Abort: ack.result = do_abort(cmd); break;
      case CommandKind::Loiter: ack.result = do_loiter(cmd); break;
      case CommandKind::BackseatMsg: ack.result = do_backseat(cmd); break;
      case CommandKind::SetConfig: ack.result = do_set_config(cmd); break;
    }
    ack.ok = !ack.result.contains("violations") || ack.result["violations"].empty();
    if (!ack.ok) {
      ack.code = std::string(to_string(ErrorCode::ValidationFailed));
      ack.message = "plan has validation violations";
    }
  } catch (const Error& e) {
    ack.ok = false;
    ack.code = std::string(to_string(e.code()));
    ack.message = e.what();
  } catch (const json::exception& e) {
    ack.ok = false;
    ack.code = std::string(to_string(ErrorCode::ParseError));
    ack.message = e.what();
  } catch (const std::exception& e) {
    ack.ok = false;
    ack.code = "Internal";
    ack.message = e.what();
  }
  return ack;
}

json Station::do_create_plan(const StationCommand& cmd) {
  const json& doc = cmd.payload.contains("plan") ? cmd.payload.at("plan") : cmd.payload;
  const plan::MissionPlan p = io::plan_from_json(doc);
  const auto violations = plan::validate(p, &loop_.simulator().environment(), loop_.config().planner);
  std::lock_guard lock(state_mu_);
  std::string id = cmd.payload.value("id", std::string());
  if (id.empty()) id = fmt::format("plan-{}", next_plan_++);
  plans_[id] = p;
  // Creation succeeds even with violations; they are reported for the form.
  return json{{"plan_id", id}, {"plan", io::plan_to_json(p)}, {"issues", io::violations_to_json(violations)}};
}

json Station::do_validate(const StationCommand& cmd) {
  std::string id = cmd.target.empty() ? cmd.payload.value("plan_id", std::string()) : cmd.target;
  plan::MissionPlan p;
  {
    std::lock_guard lock(state_mu_);
    auto it = plans_.find(id);
    if (it == plans_.end()) throw Error(ErrorCode::UnknownPlan, "unknown plan " + id);
    p = it->second;
  }
  const auto violations = plan::validate(p, &loop_.simulator().environment(), loop_.config().planner);
  return json{{"plan_id", id}, {"violations", io::violations_to_json(violations)}};
}

json Station::do_launch(const StationCommand& cmd) {
  const std::string plan_id = cmd.payload.value("plan_id", cmd.target);
  plan::MissionPlan p;
  std::string mission_id = cmd.payload.value("mission_id", std::string());
  {
    std::lock_guard lock(state_mu_);
    auto it = plans_.find(plan_id);
    if (it == plans_.end()) throw Error(ErrorCode::UnknownPlan, "unknown plan " + plan_id);
    p = it->second;
    if (mission_id.empty()) mission_id = fmt::format("mission-{}", next_mission_++);
    if (missions_.count(mission_id)) throw Error(ErrorCode::InvalidState, "mission id already used " + mission_id);
  }
  if (loop_.mission_active()) throw Error(ErrorCode::InvalidState, "a mission is already running");
  const auto violations = plan::validate(p, &loop_.simulator().environment(), loop_.config().planner);
  if (!violations.empty()) return json{{"plan_id", plan_id}, {"violations", io::violations_to_json(violations)}};

  auto log = loop_.launch(p, mission_id);
  std::lock_guard lock(state_mu_);
  missions_[mission_id] = MissionEntry{plan_id, log};
  active_mission_ = mission_id;
  phase_ = std::string(exec::to_string(loop_.executor().state().phase));
  return json{{"mission_id", mission_id}, {"plan_id", plan_id}, {"started_at", loop_.now()}};
}

json Station::do_abort(const StationCommand& cmd) {
  const std::string id = cmd.target.empty() ? cmd.payload.value("mission_id", std::string()) : cmd.target;
  {
    std::lock_guard lock(state_mu_);
    if (!missions_.count(id)) throw unknown_mission(id);
    if (id != active_mission_ || !loop_.mission_active()) {
      throw Error(ErrorCode::InvalidState, "mission " + id + " is not running");
    }
  }
  loop_.abort();
  return json{{"mission_id", id}, {"phase", std::string(exec::to_string(loop_.executor().state().phase))}};
}

json Station::do_loiter(const StationCommand& cmd) {
  const std::string id = cmd.target.empty() ? cmd.payload.value("mission_id", std::string()) : cmd.target;
  {
    std::lock_guard lock(state_mu_);
    if (!missions_.count(id)) throw unknown_mission(id);
    if (id != active_mission_ || !loop_.mission_active()) {
      throw Error(ErrorCode::InvalidState, "mission " + id + " is not running");
    }
  }
  loop_.loiter();
  return json{{"mission_id", id}, {"phase", std::string(exec::to_string(loop_.executor().state().phase))}};
}

json Station::do_backseat(const StationCommand& cmd) {
  std::vector<autonomy::BackseatMessage> msgs;
  auto parse_text = [&](const std::string& text) {
    size_t start = 0;
    while (start <= text.size()) {
      size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string_view line(text.data() + start, end - start);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
      if (!line.empty()) msgs.push_back(autonomy::parse_backseat_line(line));
      start = end + 1;
    }
  };
  if (cmd.payload.is_string()) {
    parse_text(cmd.payload.get<std::string>());
  } else if (cmd.payload.is_array()) {
    for (const auto& m : cmd.payload) msgs.push_back(autonomy::parse_backseat_line(m.dump()));
  } else if (cmd.payload.is_object()) {
    msgs.push_back(autonomy::parse_backseat_line(cmd.payload.dump()));
  } else {
    throw Error(ErrorCode::MalformedMessage, "backseat payload must be text or JSON objects");
  }
  if (msgs.empty()) throw Error(ErrorCode::MalformedMessage, "no backseat message in payload");
  for (auto& m : msgs) loop_.push_backseat(std::move(m));
  return json{{"accepted", msgs.size()}, {"mission_active", loop_.mission_active()}};
}

json Station::do_set_config(const StationCommand& cmd) {
  if (loop_.mission_active()) throw Error(ErrorCode::InvalidState, "cannot change config during a mission");
  StationConfig next = config_from_json(cmd.payload, loop_.config());
  loop_.reconfigure(next);
  std::lock_guard lock(state_mu_);
  config_ = next;
  return config_to_json(next);
}

void Station::step() {
  drain();
  TickResult result;
  {
    std::lock_guard step_lock(step_mu_);
    result = loop_.tick();
    std::lock_guard lock(state_mu_);
    sim_time_ = loop_.now();
    phase_ = std::string(exec::to_string(loop_.executor().state().phase));
  }
  publish(result);
}

void Station::publish(const TickResult& tick) {
  const std::uint64_t n = tick_count_++;
  int decimation;
  bool omniscient;
  std::optional<std::string> mission;
  {
    std::lock_guard lock(state_mu_);
    decimation = config_.telemetry_decimation;
    omniscient = config_.omniscient_link;
    if (!active_mission_.empty()) mission = active_mission_;
  }
  if (n % static_cast<std::uint64_t>(decimation) != 0) return;

  TelemetryFrame f;
  f.tick = n;
  f.sim_time = tick.record.sim_time;
  f.connection = tick.connected ? Connection::Surface : Connection::Submerged;
  f.mission_id = mission;
  if (tick.connected || omniscient) {
    f.record = tick.record;
    f.record->truth.reset();
  }
  std::lock_guard lock(subs_mu_);
  for (auto& s : subs_) s->push(f);
}

std::shared_ptr<Subscription> Station::subscribe(size_t capacity) {
  if (capacity == 0) {
    std::lock_guard lock(state_mu_);
    capacity = static_cast<size_t>(config_.subscriber_buffer);
  }
  auto sub = std::make_shared<Subscription>(capacity);
  std::lock_guard lock(subs_mu_);
  subs_.push_back(sub);
  return sub;
}

void Station::unsubscribe(const std::shared_ptr<Subscription>& sub) {
  sub->close();
  std::lock_guard lock(subs_mu_);
  subs_.erase(std::remove(subs_.begin(), subs_.end(), sub), subs_.end());
}

size_t Station::subscriber_count() const {
  std::lock_guard lock(subs_mu_);
  return subs_.size();
}

void Station::start() {
  if (running_.exchange(true)) return;
  thread_ = std::thread([this] { run_loop(); });
}

void Station::stop() {
  if (!running_.exchange(false)) return;
  if (thread_.joinable()) thread_.join();
  drain();
}

void Station::record_interval(double seconds) {
  std::lock_guard lock(stats_mu_);
  if (intervals_.size() >= kMaxIntervals) intervals_.erase(intervals_.begin(), intervals_.begin() + kMaxIntervals / 2);
  intervals_.push_back(seconds);
}

void Station::run_loop() {
  using clock = std::chrono::steady_clock;
  auto next = clock::now();
  std::optional<clock::time_point> last;
  while (running_.load()) {
    double period;
    {
      std::lock_guard lock(state_mu_);
      period = config_.tick_dt / config_.time_scale;
    }
    const auto now = clock::now();
    if (last) record_interval(std::chrono::duration<double>(now - *last).count());
    last = now;
    step();
    {
      std::lock_guard lock(stats_mu_);
      ++stat_ticks_;
    }
    const auto step_period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(period));
    next += step_period;
    const auto after = clock::now();
    if (after > next + 5 * step_period) next = after;  // fell behind; resynchronize
    if (period >= 1e-4) std::this_thread::sleep_until(next);
  }
}

LoopStats Station::stats() const {
  LoopStats s;
  std::vector<double> iv;
  {
    std::lock_guard lock(stats_mu_);
    iv = intervals_;
    s.ticks = stat_ticks_;
  }
  {
    std::lock_guard lock(state_mu_);
    s.period = config_.tick_dt / config_.time_scale;
  }
  if (iv.empty()) return s;
  double sum = 0.0;
  std::vector<double> dev;
  dev.reserve(iv.size());
  for (double v : iv) {
    sum += v;
    dev.push_back(std::abs(v - s.period));
  }
  s.mean_interval = sum / static_cast<double>(iv.size());
  std::sort(dev.begin(), dev.end());
  s.max_deviation = dev.back();
  s.p99_deviation = dev[static_cast<size_t>(std::floor(0.99 * static_cast<double>(dev.size() - 1)))];
  return s;
}

std::vector<MissionSummary> Station::list_missions() const {
  std::vector<std::pair<std::string, MissionEntry>> entries;
  std::string active;
  {
    std::lock_guard lock(state_mu_);
    entries.assign(missions_.begin(), missions_.end());
    active = active_mission_;
  }
  std::vector<MissionSummary> out;
  for (const auto& [id, e] : entries) {
    MissionSummary m;
    m.mission_id = id;
    m.plan_id = e.plan_id;
    e.log->read([&](const mlog::MissionLog& l) {
      m.type = std::string(plan::type_name(l.plan()));
      m.records = l.records().size();
      m.finalized = l.finalized();
      m.phase = l.empty() ? "Idle" : std::string(exec::to_string(l.records().back().phase));
      return 0;
    });
    m.active = id == active && !m.finalized;
    out.push_back(std::move(m));
  }
  return out;
}

std::shared_ptr<SharedLog> Station::mission_log(const std::string& id) const {
  std::lock_guard lock(state_mu_);
  auto it = missions_.find(id);
  if (it == missions_.end()) throw unknown_mission(id);
  return it->second.log;
}

std::string Station::get_log(const std::string& id) const {
  return mission_log(id)->read([](const mlog::MissionLog& l) { return l.serialize(); });
}

json Station::quickview(const std::string& id, double t) const {
  return mission_log(id)->read([&](const mlog::MissionLog& l) {
    const size_t i = l.quickview_index(t);
    return json{{"mission_id", id}, {"t", t}, {"index", i}, {"record", mlog::record_to_json(l.records()[i])}};
  });
}

std::string Station::export_mission(const std::string& id, mlog::ExportFormat format) const {
  return mission_log(id)->read([&](const mlog::MissionLog& l) { return l.export_as(format); });
}

json Station::plan_document(const std::string& plan_id) const {
  std::lock_guard lock(state_mu_);
  auto it = plans_.find(plan_id);
  if (it == plans_.end()) throw Error(ErrorCode::UnknownPlan, "unknown plan " + plan_id);
  return io::plan_to_json(it->second);
}

double Station::sim_time() const {
  std::lock_guard lock(state_mu_);
  return sim_time_;
}

std::string Station::current_phase() const {
  std::lock_guard lock(state_mu_);
  return phase_;
}

StationConfig Station::config() const {
  std::lock_guard lock(state_mu_);
  return config_;
}

}  // namespace seashark::station
