#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "seashark/config.hpp"
#include "seashark/control_loop.hpp"
#include "seashark/mission_log.hpp"

namespace seashark::station {

using nlohmann::json;

enum class CommandKind { CreatePlan, Validate, Launch, Abort, Loiter, BackseatMsg, SetConfig };

std::string_view to_string(CommandKind kind);
CommandKind command_kind_from_string(std::string_view name);

struct StationCommand {
  CommandKind kind = CommandKind::CreatePlan;
  std::string request_id;  // echoed in the ack; generated when empty
  std::string target;      // plan id (Validate) or mission id (Abort, Loiter)
  json payload;
};

/// Exactly one per command.
struct Ack {
  std::string request_id;
  std::uint64_t seq = 0;      // arrival order
  std::uint64_t applied = 0;  // application order
  CommandKind kind = CommandKind::CreatePlan;
  bool ok = false;
  std::string code;  // error code name when !ok
  std::string message;
  json result;
  double sim_time = 0.0;  // tick boundary at which it was applied
};

json ack_to_json(const Ack& ack);

enum class Connection { Surface, Submerged };
std::string_view to_string(Connection c);

/// Surface frames carry the vehicle view; submerged ones are heartbeats.
struct TelemetryFrame {
  std::uint64_t tick = 0;
  double sim_time = 0.0;
  Connection connection = Connection::Surface;
  std::optional<mlog::LogRecord> record;  // truth stripped; empty for heartbeats
  std::optional<std::string> mission_id;
};

json telemetry_to_json(const TelemetryFrame& frame);

/// Bounded per-subscriber queue. The producer never blocks: when full the
/// oldest frame is dropped.
class Subscription {
 public:
  explicit Subscription(size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  void push(TelemetryFrame frame);
  /// Waits up to `timeout`; empty on timeout or once closed and drained.
  std::optional<TelemetryFrame> pop(std::chrono::milliseconds timeout);
  void close();
  bool closed() const;
  std::uint64_t dropped() const;
  std::uint64_t delivered() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<TelemetryFrame> queue_;
  size_t capacity_;
  bool closed_ = false;
  std::uint64_t dropped_ = 0;
  std::uint64_t delivered_ = 0;
};

struct LoopStats {
  std::uint64_t ticks = 0;
  double period = 0.0;         // s, nominal wall-clock tick period
  double mean_interval = 0.0;  // s
  double max_deviation = 0.0;  // s, max |interval - period|
  double p99_deviation = 0.0;  // s
};

struct MissionSummary {
  std::string mission_id;
  std::string plan_id;
  std::string type;
  std::string phase;
  size_t records = 0;
  bool finalized = false;
  bool active = false;
};

/// Hosts one simulated vehicle. Commands queue in arrival order and are applied
/// at tick boundaries by the loop; queries read logs concurrently.
class Station {
 public:
  explicit Station(StationConfig config);
  ~Station();

  Station(const Station&) = delete;
  Station& operator=(const Station&) = delete;

  std::future<Ack> submit(StationCommand cmd);
  /// Submits and waits. Without a running loop the queue is drained inline.
  Ack execute(StationCommand cmd);

  /// Applies queued commands (a tick boundary without a tick).
  void drain();
  /// drain, tick, publish. For manual clocks; do not mix with start().
  void step();

  /// Runs the loop on its own thread paced at tick_dt / time_scale.
  void start();
  void stop();
  bool running() const { return running_.load(); }

  std::shared_ptr<Subscription> subscribe(size_t capacity = 0);
  void unsubscribe(const std::shared_ptr<Subscription>& sub);
  size_t subscriber_count() const;

  std::vector<MissionSummary> list_missions() const;
  /// Throw UnknownMission.
  std::string get_log(const std::string& mission_id) const;
  json quickview(const std::string& mission_id, double t) const;
  /// Also throws ReconstructionMissing for track formats of unfinished missions.
  std::string export_mission(const std::string& mission_id, mlog::ExportFormat format) const;
  std::shared_ptr<SharedLog> mission_log(const std::string& mission_id) const;

  /// Throws UnknownPlan.
  json plan_document(const std::string& plan_id) const;

  LoopStats stats() const;
  double sim_time() const;
  std::string current_phase() const;
  StationConfig config() const;

 private:
  struct Pending {
    StationCommand cmd;
    std::uint64_t seq = 0;
    std::promise<Ack> promise;
  };
  struct MissionEntry {
    std::string plan_id;
    std::shared_ptr<SharedLog> log;
  };

  Ack apply(StationCommand& cmd);
  json do_create_plan(const StationCommand& cmd);
  json do_validate(const StationCommand& cmd);
  json do_launch(const StationCommand& cmd);
  json do_abort(const StationCommand& cmd);
  json do_loiter(const StationCommand& cmd);
  json do_backseat(const StationCommand& cmd);
  json do_set_config(const StationCommand& cmd);
  void publish(const TickResult& tick);
  void run_loop();
  void record_interval(double seconds);

  ControlLoop loop_;
  std::mutex step_mu_;  // serializes drain and tick

  mutable std::mutex queue_mu_;
  std::deque<Pending> queue_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t applied_count_ = 0;

  mutable std::mutex state_mu_;  // plans, missions, snapshot fields below
  std::map<std::string, plan::MissionPlan> plans_;
  std::map<std::string, MissionEntry> missions_;
  std::string active_mission_;
  std::uint64_t next_plan_ = 1;
  std::uint64_t next_mission_ = 1;
  double sim_time_ = 0.0;
  std::string phase_ = "Idle";
  StationConfig config_;

  mutable std::mutex subs_mu_;
  std::vector<std::shared_ptr<Subscription>> subs_;
  std::uint64_t tick_count_ = 0;

  mutable std::mutex stats_mu_;
  std::vector<double> intervals_;
  std::uint64_t stat_ticks_ = 0;

  std::atomic<bool> running_{false};
  std::thread thread_;
};

}  // namespace seashark::station
