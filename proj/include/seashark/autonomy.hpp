#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seashark/control.hpp"
#include "seashark/envsim.hpp"

namespace seashark::autonomy {

using control::NavReference;
using geo::Heading;
using plan::DepthRef;

enum class SensorField { Depth, Altitude, Compass, GnssAvailable, ObjectSeen, SimTime };
enum class Comparator { Less, LessEqual, Equal, GreaterEqual, Greater };

std::string_view to_string(SensorField f);
std::string_view to_string(Comparator c);
SensorField sensor_field_from_string(std::string_view s);
Comparator comparator_from_string(std::string_view s);

/// `field cmp threshold`. A channel with no reading (altimeter NoReturn) never satisfies it.
struct Condition {
  SensorField field = SensorField::Depth;
  Comparator cmp = Comparator::Less;
  double threshold = 0.0;

  bool holds(const sim::SensorFrame& frame) const;
};

struct SwitchMission {
  std::string plan_id;
};
struct EndMission {};
struct SetRefs {
  NavReference ref;
};
struct ResumePrevious {};

using EventAction = std::variant<SwitchMission, EndMission, SetRefs, ResumePrevious>;

/// Fires when every condition held for `debounce` consecutive frames; re-arms
/// only after the conjunction turns false.
struct EventRule {
  std::string id;
  std::vector<Condition> all_of;
  int debounce = 1;
  EventAction action;
};

struct RuleState {
  int consecutive = 0;
  bool fired = false;
};

struct TriggeredAction {
  std::string rule_id;
  EventAction action;
};

/// Throws InvalidParams for debounce < 1, empty conditions, or SwitchMission
/// targets missing from `known_plans`.
void validate_rules(const std::vector<EventRule>& rules, const std::set<std::string>& known_plans);

/// Returns triggered actions in rule-list order. `state` is resized to match `rules`.
std::vector<TriggeredAction> evaluate_events(const std::vector<EventRule>& rules,
                                             const sim::SensorFrame& frame, std::vector<RuleState>& state);

struct BackseatMessage {
  std::optional<Heading> heading;
  std::optional<DepthRef> depth_ref;
  double timestamp = 0.0;
  std::string session;
};

/// One line of the backseat wire format:
///   {"session":"s1","timestamp":12.0,"heading_deg":45.0,"depth_m":3.0}
/// `depth_m` and `altitude_m` are mutually exclusive. Throws MalformedMessage.
BackseatMessage parse_backseat_line(std::string_view line);
std::string format_backseat_line(const BackseatMessage& msg);

struct SafetyEnvelope {
  double max_depth = 100.0;   // m
  double min_altitude = 1.0;  // m
};

struct IngestResult {
  NavReference ref;
  bool clamped = false;
};

/// Fills missing fields from `mission_ref`, stamps issued_at = now, clamps the
/// vertical reference to the envelope. Throws MalformedMessage when neither
/// heading nor depth_ref is present.
IngestResult ingest_backseat(const BackseatMessage& msg, const NavReference& mission_ref, double now,
                             const SafetyEnvelope& envelope = {});

/// Thread-safe mailbox: producers push from any thread, the control loop
/// drains once per tick and keeps the latest message per session.
class BackseatInbox {
 public:
  void push(BackseatMessage msg);
  /// Latest pending message (greatest timestamp across sessions), clearing the box.
  std::optional<BackseatMessage> take_latest();
  void clear();

 private:
  std::mutex mu_;
  std::map<std::string, BackseatMessage> latest_;
};

}  // namespace seashark::autonomy
