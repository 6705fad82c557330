#include <doctest.h>

#include <thread>

#include "test_util.hpp"
#include "seashark/autonomy.hpp"

using namespace seashark;
using namespace seashark::autonomy;

namespace {

sim::SensorFrame with_depth(double depth) {
  sim::SensorFrame f;
  f.depth = depth;
  f.altitude = 10.0;
  return f;
}

EventRule deep_rule(int debounce) {
  return {"deep", {{SensorField::Depth, Comparator::Greater, 2.0}}, debounce, EndMission{}};
}

const NavReference kMission{Heading(10), DepthRef::depth(2.0), control::RefSource::Mission, 0.0};

}  // namespace

TEST_SUITE("autonomy") {

TEST_CASE("conditions compare sensor channels") {
  sim::SensorFrame f = with_depth(3.0);
  CHECK(Condition{SensorField::Depth, Comparator::Greater, 2.0}.holds(f));
  CHECK_FALSE(Condition{SensorField::Depth, Comparator::Less, 2.0}.holds(f));
  CHECK(Condition{SensorField::Depth, Comparator::GreaterEqual, 3.0}.holds(f));
  CHECK(Condition{SensorField::Depth, Comparator::LessEqual, 3.0}.holds(f));
  CHECK(Condition{SensorField::Depth, Comparator::Equal, 3.0}.holds(f));
  f.altitude.reset();
  CHECK_FALSE(Condition{SensorField::Altitude, Comparator::Less, 100.0}.holds(f));
  CHECK_FALSE(Condition{SensorField::Altitude, Comparator::Greater, -1.0}.holds(f));
  CHECK_FALSE(Condition{SensorField::ObjectSeen, Comparator::Equal, 1.0}.holds(f));
  f.object_seen = true;
  CHECK(Condition{SensorField::ObjectSeen, Comparator::Equal, 1.0}.holds(f));
}

TEST_CASE("rules fire after the debounce count") {
  const std::vector<EventRule> rules{deep_rule(3)};
  std::vector<RuleState> st;
  CHECK(evaluate_events(rules, with_depth(3.0), st).empty());
  CHECK(evaluate_events(rules, with_depth(3.0), st).empty());
  const auto fired = evaluate_events(rules, with_depth(3.0), st);
  REQUIRE(fired.size() == 1);
  CHECK(fired[0].rule_id == "deep");
  CHECK(std::holds_alternative<EndMission>(fired[0].action));
}

TEST_CASE("a broken streak restarts the debounce") {
  const std::vector<EventRule> rules{deep_rule(3)};
  std::vector<RuleState> st;
  evaluate_events(rules, with_depth(3.0), st);
  evaluate_events(rules, with_depth(3.0), st);
  CHECK(evaluate_events(rules, with_depth(1.0), st).empty());
  CHECK(evaluate_events(rules, with_depth(3.0), st).empty());
  CHECK(evaluate_events(rules, with_depth(3.0), st).empty());
  CHECK(evaluate_events(rules, with_depth(3.0), st).size() == 1);
}

TEST_CASE("rules are edge triggered") {
  const std::vector<EventRule> rules{deep_rule(1)};
  std::vector<RuleState> st;
  int fires = 0;
  const std::vector<double> depths{3, 3, 3, 1, 3, 3, 1, 1, 3};
  for (double d : depths) fires += static_cast<int>(evaluate_events(rules, with_depth(d), st).size());
  CHECK(fires == 3);
}

TEST_CASE("simultaneous triggers keep rule order") {
  std::vector<EventRule> rules{
      {"b", {{SensorField::Depth, Comparator::Greater, 1.0}}, 1, SwitchMission{"p"}},
      {"a", {{SensorField::Depth, Comparator::Greater, 0.5}}, 1, ResumePrevious{}},
  };
  std::vector<RuleState> st;
  const auto fired = evaluate_events(rules, with_depth(2.0), st);
  REQUIRE(fired.size() == 2);
  CHECK(fired[0].rule_id == "b");
  CHECK(fired[1].rule_id == "a");
}

TEST_CASE("rule validation") {
  CHECK_NOTHROW(validate_rules({deep_rule(1)}, {}));
  CHECK(error_code([] { validate_rules({deep_rule(0)}, {}); }) == ErrorCode::InvalidParams);
  EventRule empty{"e", {}, 1, EndMission{}};
  CHECK(error_code([&] { validate_rules({empty}, {}); }) == ErrorCode::InvalidParams);
  EventRule sw{"s", {{SensorField::Depth, Comparator::Greater, 1.0}}, 1, SwitchMission{"nope"}};
  CHECK(error_code([&] { validate_rules({sw}, {"other"}); }) == ErrorCode::InvalidParams);
  CHECK_NOTHROW(validate_rules({sw}, {"nope"}));
}

TEST_CASE("enum names round trip") {
  for (auto f : {SensorField::Depth, SensorField::Altitude, SensorField::Compass, SensorField::GnssAvailable,
                 SensorField::ObjectSeen, SensorField::SimTime}) {
    CHECK(sensor_field_from_string(to_string(f)) == f);
  }
  for (auto c : {Comparator::Less, Comparator::LessEqual, Comparator::Equal, Comparator::GreaterEqual,
                 Comparator::Greater}) {
    CHECK(comparator_from_string(to_string(c)) == c);
  }
}

TEST_CASE("backseat wire format") {
  const auto m = parse_backseat_line(R"({"session":"s1","timestamp":12.0,"heading_deg":45.0,"depth_m":3.0})");
  CHECK(m.session == "s1");
  CHECK(m.timestamp == 12.0);
  CHECK(*m.heading == Heading(45));
  CHECK(*m.depth_ref == DepthRef::depth(3.0));

  const auto again = parse_backseat_line(format_backseat_line(m));
  CHECK(again.session == m.session);
  CHECK(again.timestamp == m.timestamp);
  CHECK(again.heading == m.heading);
  CHECK(again.depth_ref == m.depth_ref);

  const auto alt = parse_backseat_line(R"({"session":"s","timestamp":1,"altitude_m":2.5})");
  CHECK_FALSE(alt.heading.has_value());
  CHECK(*alt.depth_ref == DepthRef::altitude(2.5));
}

TEST_CASE("malformed backseat lines are rejected") {
  for (const char* bad : {
           "not json",
           "[1,2]",
           R"({"timestamp":1,"heading_deg":10})",
           R"({"session":"s","heading_deg":10})",
           R"({"session":"s","timestamp":1})",
           R"({"session":"s","timestamp":1,"depth_m":2,"altitude_m":2})",
           R"({"session":"s","timestamp":1,"depth_m":-1})",
           R"({"session":"","timestamp":1,"heading_deg":10})",
           R"({"session":"s","timestamp":"x","heading_deg":10})",
       }) {
    CAPTURE(bad);
    CHECK(error_code([&] { parse_backseat_line(bad); }) == ErrorCode::MalformedMessage);
  }
}

TEST_CASE("partial messages keep the mission's other axis") {
  BackseatMessage m;
  m.session = "s";
  m.heading = Heading(200);
  const auto r = ingest_backseat(m, kMission, 7.0);
  CHECK(r.ref.heading == Heading(200));
  CHECK(r.ref.depth_ref == kMission.depth_ref);
  CHECK(r.ref.source == control::RefSource::Backseat);
  CHECK(r.ref.issued_at == 7.0);
  CHECK_FALSE(r.clamped);

  BackseatMessage d;
  d.session = "s";
  d.depth_ref = DepthRef::depth(4.0);
  const auto rd = ingest_backseat(d, kMission, 7.0);
  CHECK(rd.ref.heading == kMission.heading);
  CHECK(rd.ref.depth_ref == DepthRef::depth(4.0));

  BackseatMessage none;
  none.session = "s";
  CHECK(error_code([&] { ingest_backseat(none, kMission, 0.0); }) == ErrorCode::MalformedMessage);
}

TEST_CASE("vertical references are clamped to the envelope") {
  BackseatMessage deep;
  deep.session = "s";
  deep.depth_ref = DepthRef::depth(250.0);
  const auto r = ingest_backseat(deep, kMission, 0.0);
  CHECK(r.clamped);
  CHECK(r.ref.depth_ref.value == 100.0);

  BackseatMessage low;
  low.session = "s";
  low.depth_ref = DepthRef::altitude(0.2);
  const auto rl = ingest_backseat(low, kMission, 0.0, {50.0, 1.5});
  CHECK(rl.clamped);
  CHECK(rl.ref.depth_ref.value == 1.5);
}

TEST_CASE("inbox hands over the most recent message") {
  BackseatInbox box;
  CHECK_FALSE(box.take_latest().has_value());
  box.push({Heading(10), std::nullopt, 1.0, "a"});
  box.push({Heading(20), std::nullopt, 3.0, "b"});
  box.push({Heading(30), std::nullopt, 2.0, "a"});
  const auto m = box.take_latest();
  REQUIRE(m.has_value());
  CHECK(m->session == "b");
  CHECK(*m->heading == Heading(20));
  CHECK_FALSE(box.take_latest().has_value());
}

TEST_CASE("inbox accepts concurrent producers") {
  BackseatInbox box;
  std::vector<std::thread> producers;
  for (int p = 0; p < 4; ++p) {
    producers.emplace_back([&box, p] {
      for (int i = 0; i < 1000; ++i) {
        box.push({Heading(p * 10.0), std::nullopt, p * 1000.0 + i, "s" + std::to_string(p)});
      }
    });
  }
  for (auto& t : producers) t.join();
  const auto m = box.take_latest();
  REQUIRE(m.has_value());
  CHECK(m->timestamp == 3999.0);
}

}  // TEST_SUITE
