#include "seashark/autonomy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "seashark/error.hpp"

namespace seashark::autonomy {

namespace {

constexpr std::array<std::pair<SensorField, std::string_view>, 6> kFields{{
    {SensorField::Depth, "depth"},
    {SensorField::Altitude, "altitude"},
    {SensorField::Compass, "compass"},
    {SensorField::GnssAvailable, "gnss_available"},
    {SensorField::ObjectSeen, "object_seen"},
    {SensorField::SimTime, "sim_time"},
}};

constexpr std::array<std::pair<Comparator, std::string_view>, 5> kComparators{{
    {Comparator::Less, "<"},
    {Comparator::LessEqual, "<="},
    {Comparator::Equal, "=="},
    {Comparator::GreaterEqual, ">="},
    {Comparator::Greater, ">"},
}};

std::optional<double> read(SensorField f, const sim::SensorFrame& frame) {
  switch (f) {
    case SensorField::Depth: return frame.depth;
    case SensorField::Altitude: return frame.altitude;
    case SensorField::Compass: return frame.compass.degrees();
    case SensorField::GnssAvailable: return frame.gnss ? 1.0 : 0.0;
    case SensorField::ObjectSeen: return frame.object_seen ? 1.0 : 0.0;
    case SensorField::SimTime: return frame.sim_time;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(SensorField f) {
  for (const auto& [k, v] : kFields) {
    if (k == f) return v;
  }
  return "depth";
}

std::string_view to_string(Comparator c) {
  for (const auto& [k, v] : kComparators) {
    if (k == c) return v;
  }
  return "<";
}

SensorField sensor_field_from_string(std::string_view s) {
  for (const auto& [k, v] : kFields) {
    if (v == s) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown sensor field " + std::string(s));
}

Comparator comparator_from_string(std::string_view s) {
  for (const auto& [k, v] : kComparators) {
    if (v == s) return k;
  }
  if (s == "=") return Comparator::Equal;
  throw Error(ErrorCode::ParseError, "unknown comparator " + std::string(s));
}

bool Condition::holds(const sim::SensorFrame& frame) const {
  const auto value = read(field, frame);
  if (!value) return false;
  switch (cmp) {
    case Comparator::Less: return *value < threshold;
    case Comparator::LessEqual: return *value <= threshold;
    case Comparator::Equal: return *value == threshold;
    case Comparator::GreaterEqual: return *value >= threshold;
    case Comparator::Greater: return *value > threshold;
  }
  return false;
}

void validate_rules(const std::vector<EventRule>& rules, const std::set<std::string>& known_plans) {
  for (const auto& r : rules) {
    if (r.debounce < 1) throw Error(ErrorCode::InvalidParams, "rule " + r.id + ": debounce must be >= 1");
    if (r.all_of.empty()) throw Error(ErrorCode::InvalidParams, "rule " + r.id + ": no conditions");
    if (const auto* sw = std::get_if<SwitchMission>(&r.action)) {
      if (!known_plans.contains(sw->plan_id)) {
        throw Error(ErrorCode::InvalidParams, "rule " + r.id + ": unknown plan " + sw->plan_id);
      }
    }
  }
}

std::vector<TriggeredAction> evaluate_events(const std::vector<EventRule>& rules,
                                             const sim::SensorFrame& frame, std::vector<RuleState>& state) {
  state.resize(rules.size());
  std::vector<TriggeredAction> out;
  for (size_t i = 0; i < rules.size(); ++i) {
    const auto& rule = rules[i];
    auto& st = state[i];
    const bool all = std::all_of(rule.all_of.begin(), rule.all_of.end(),
                                 [&](const Condition& c) { return c.holds(frame); });
    if (!all) {
      st.consecutive = 0;
      st.fired = false;
      continue;
    }
    st.consecutive += 1;
    if (!st.fired && st.consecutive >= rule.debounce) {
      st.fired = true;
      out.push_back({rule.id, rule.action});
    }
  }
  return out;
}

BackseatMessage parse_backseat_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedMessage, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedMessage, "backseat message must be an object");
  BackseatMessage msg;
  try {
    msg.session = j.at("session").get<std::string>();
    msg.timestamp = j.at("timestamp").get<double>();
    if (j.contains("heading_deg")) msg.heading = Heading(j.at("heading_deg").get<double>());
    const bool has_depth = j.contains("depth_m");
    const bool has_alt = j.contains("altitude_m");
    if (has_depth && has_alt) {
      throw Error(ErrorCode::MalformedMessage, "depth_m and altitude_m are mutually exclusive");
    }
    if (has_depth) msg.depth_ref = DepthRef::depth(j.at("depth_m").get<double>());
    if (has_alt) msg.depth_ref = DepthRef::altitude(j.at("altitude_m").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedMessage, e.what());
  }
  if (msg.session.empty()) throw Error(ErrorCode::MalformedMessage, "empty session");
  if (!msg.heading && !msg.depth_ref) {
    throw Error(ErrorCode::MalformedMessage, "message carries neither heading nor depth/altitude");
  }
  if (msg.depth_ref && !(msg.depth_ref->value >= 0.0 && std::isfinite(msg.depth_ref->value))) {
    throw Error(ErrorCode::MalformedMessage, "vertical reference must be a finite value >= 0");
  }
  return msg;
}

std::string format_backseat_line(const BackseatMessage& msg) {
  nlohmann::json j;
  j["session"] = msg.session;
  j["timestamp"] = msg.timestamp;
  if (msg.heading) j["heading_deg"] = msg.heading->degrees();
  if (msg.depth_ref) {
    j[msg.depth_ref->mode == plan::DepthMode::Depth ? "depth_m" : "altitude_m"] = msg.depth_ref->value;
  }
  return j.dump();
}

IngestResult ingest_backseat(const BackseatMessage& msg, const NavReference& mission_ref, double now,
                             const SafetyEnvelope& envelope) {
  if (!msg.heading && !msg.depth_ref) {
    throw Error(ErrorCode::MalformedMessage, "message carries neither heading nor depth/altitude");
  }
  IngestResult res;
  res.ref.heading = msg.heading.value_or(mission_ref.heading);
  res.ref.depth_ref = msg.depth_ref.value_or(mission_ref.depth_ref);
  res.ref.source = control::RefSource::Backseat;
  res.ref.issued_at = now;
  if (msg.depth_ref) {
    auto& d = res.ref.depth_ref;
    if (d.mode == plan::DepthMode::Depth && d.value > envelope.max_depth) {
      d.value = envelope.max_depth;
      res.clamped = true;
    } else if (d.mode == plan::DepthMode::Altitude && d.value < envelope.min_altitude) {
      d.value = envelope.min_altitude;
      res.clamped = true;
    }
  }
  return res;
}

void BackseatInbox::push(BackseatMessage msg) {
  std::lock_guard lock(mu_);
  auto it = latest_.find(msg.session);
  if (it == latest_.end()) {
    latest_.emplace(msg.session, std::move(msg));
  } else {
    it->second = std::move(msg);
  }
}

std::optional<BackseatMessage> BackseatInbox::take_latest() {
  std::lock_guard lock(mu_);
  if (latest_.empty()) return std::nullopt;
  auto best = latest_.begin();
  for (auto it = latest_.begin(); it != latest_.end(); ++it) {
    if (it->second.timestamp > best->second.timestamp) best = it;
  }
  BackseatMessage msg = best->second;
  latest_.clear();
  return msg;
}

void BackseatInbox::clear() {
  std::lock_guard lock(mu_);
  latest_.clear();
}

}  // namespace seashark::autonomy
