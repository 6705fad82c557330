#pragma once

// JSON encodings shared by plan documents, log lines and the station protocol.
// Decoders throw seashark::Error(ParseError).

#include <nlohmann/json.hpp>

#include "seashark/control.hpp"
#include "seashark/envsim.hpp"
#include "seashark/mission_plan.hpp"
#include "seashark/navigation.hpp"

namespace seashark::io {

using json = nlohmann::json;

json geo_to_json(const geo::GeoPoint& p);
geo::GeoPoint geo_from_json(const json& j);

json depth_ref_to_json(const plan::DepthRef& r);
plan::DepthRef depth_ref_from_json(const json& j);

json plan_to_json(const plan::MissionPlan& plan);
plan::MissionPlan plan_from_json(const json& j);

json state_to_json(const sim::VehicleState& s);
sim::VehicleState state_from_json(const json& j);

json frame_to_json(const sim::SensorFrame& f);
sim::SensorFrame frame_from_json(const json& j);

json ref_to_json(const control::NavReference& r);
control::NavReference ref_from_json(const json& j);

json nav_to_json(const nav::NavEstimate& e);
nav::NavEstimate nav_from_json(const json& j);

json violations_to_json(const std::vector<plan::Violation>& v);

}  // namespace seashark::io
