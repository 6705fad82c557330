#include "seashark/mission_log.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "seashark/error.hpp"
#include "seashark/json_io.hpp"

namespace seashark::mlog {

using io::json;

struct MissionLog::FileSink {
  std::ofstream out;
};

namespace {

std::string header_line(const std::string& id, const plan::MissionPlan& p, bool field_mode) {
  json h;
  h["kind"] = "header";
  h["mission_id"] = id;
  h["field_mode"] = field_mode;
  h["plan"] = io::plan_to_json(p);
  return h.dump();
}

const std::string kFinalizedLine = R"({"kind":"finalized"})";

// Re-runs dead reckoning from the fix over the logged compass and speed so the
// DR track is sampled exactly at both fix times.
nav::Track rerun_dead_reckoning(const std::vector<LogRecord>& records, const nav::NavEstimate& start,
                                size_t first, size_t last_inclusive) {
  nav::Track dr;
  nav::NavEstimate p = start;
  p.source = nav::NavSource::DeadReckoned;
  dr.push_back(p);
  for (size_t i = first; i <= last_inclusive; ++i) {
    const LogRecord& r = records[i];
    nav::NavEstimate next = nav::dead_reckon_step(p, r.frame.compass, r.nav.speed_used, r.sim_time - p.sim_time);
    next.sim_time = r.sim_time;
    dr.push_back(next);
    p = next;
  }
  return dr;
}

}  // namespace

json record_to_json(const LogRecord& r) {
  json j;
  j["kind"] = "record";
  j["sim_time"] = r.sim_time;
  j["phase"] = std::string(exec::to_string(r.phase));
  j["line_index"] = r.line_index;
  j["truth"] = r.truth ? io::state_to_json(*r.truth) : json(nullptr);
  j["frame"] = io::frame_to_json(r.frame);
  j["applied"] = io::ref_to_json(r.applied);
  j["nav"] = io::nav_to_json(r.nav);
  j["notes"] = r.notes;
  return j;
}

LogRecord record_from_json(const json& j) {
  try {
    LogRecord r;
    r.sim_time = j.at("sim_time").get<double>();
    r.phase = exec::phase_from_string(j.at("phase").get<std::string>());
    r.line_index = j.at("line_index").get<int>();
    if (!j.at("truth").is_null()) r.truth = io::state_from_json(j.at("truth"));
    r.frame = io::frame_from_json(j.at("frame"));
    r.applied = io::ref_from_json(j.at("applied"));
    r.nav = io::nav_from_json(j.at("nav"));
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

ExportFormat export_format_from_string(std::string_view s) {
  if (s == "track") return ExportFormat::Track;
  if (s == "records") return ExportFormat::Records;
  if (s == "geotrack") return ExportFormat::GeoTrack;
  throw Error(ErrorCode::ParseError, "unknown export format " + std::string(s));
}

MissionLog::MissionLog(std::string mission_id, plan::MissionPlan plan, bool field_mode)
    : mission_id_(std::move(mission_id)), plan_(std::move(plan)), field_mode_(field_mode) {}

bool operator==(const MissionLog& a, const MissionLog& b) {
  return a.mission_id_ == b.mission_id_ && a.plan_ == b.plan_ && a.field_mode_ == b.field_mode_ &&
         a.records_ == b.records_ && a.reconstruction_ == b.reconstruction_;
}

void MissionLog::attach_file(const std::string& path) {
  auto sink = std::make_shared<FileSink>();
  sink->out.open(path, std::ios::out | std::ios::trunc);
  if (!sink->out) throw Error(ErrorCode::ParseError, "cannot open log file " + path);
  sink->out << kLogHeader << '\n' << header_line(mission_id_, plan_, field_mode_) << '\n';
  for (const auto& r : records_) sink->out << record_to_json(r).dump() << '\n';
  sink->out.flush();
  sink_ = std::move(sink);
}

void MissionLog::append(LogRecord record) {
  if (!records_.empty() && !(record.sim_time > records_.back().sim_time)) {
    throw Error(ErrorCode::TimeOrderViolation, "log records must have strictly increasing sim_time");
  }
  if (finalized()) throw Error(ErrorCode::InvalidState, "log already finalized");
  if (field_mode_) record.truth.reset();
  if (sink_) {
    sink_->out << record_to_json(record).dump() << '\n';
    sink_->out.flush();
    if (!sink_->out) throw Error(ErrorCode::ParseError, "log write failed");
  }
  records_.push_back(std::move(record));
}

std::vector<nav::NavEstimate> MissionLog::gnss_fixes() const {
  std::vector<nav::NavEstimate> out;
  for (const auto& r : records_) {
    if (r.frame.gnss) out.push_back(r.nav);
  }
  return out;
}

size_t MissionLog::quickview_index(double t) const {
  if (records_.empty()) throw Error(ErrorCode::InvalidState, "quickview on an empty log");
  auto it = std::upper_bound(records_.begin(), records_.end(), t,
                             [](double v, const LogRecord& r) { return v < r.sim_time; });
  if (it == records_.begin()) return 0;
  return static_cast<size_t>(std::distance(records_.begin(), it)) - 1;
}

const LogRecord& MissionLog::quickview_at(double t) const { return records_[quickview_index(t)]; }

std::vector<UnderwaterSegment> find_segments(const std::vector<LogRecord>& records) {
  std::vector<UnderwaterSegment> segments;
  size_t i = 0;
  while (i < records.size()) {
    if (records[i].frame.gnss) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < records.size() && !records[j + 1].frame.gnss) ++j;

    UnderwaterSegment seg;
    seg.first_record = i;
    seg.last_record = j;
    if (i > 0) seg.fix_before = records[i - 1].nav;
    if (j + 1 < records.size()) seg.fix_after = records[j + 1].nav;
    seg.gap = !seg.fix_before || !seg.fix_after;
    if (seg.fix_before) {
      const size_t end = seg.fix_after ? j + 1 : j;
      seg.dead_reckoned = rerun_dead_reckoning(records, *seg.fix_before, i, end);
    } else {
      for (size_t k = i; k <= j; ++k) seg.dead_reckoned.push_back(records[k].nav);
    }
    segments.push_back(std::move(seg));
    i = j + 1;
  }
  return segments;
}

void MissionLog::finalize() {
  Reconstruction rec;
  rec.segments = find_segments(records_);
  for (auto& seg : rec.segments) {
    if (seg.gap) continue;
    seg.reconstructed = nav::reconstruct_track(seg.dead_reckoned, *seg.fix_before, *seg.fix_after);
    seg.drift = nav::estimate_drift(*seg.fix_before, *seg.fix_after, seg.dead_reckoned);
  }
  const bool first_time = !reconstruction_.has_value();
  reconstruction_ = std::move(rec);
  if (sink_ && first_time) {
    sink_->out << kFinalizedLine << '\n';
    sink_->out.flush();
  }
}

nav::Track MissionLog::merged_track() const {
  if (!reconstruction_) throw Error(ErrorCode::ReconstructionMissing, "log not finalized");
  nav::Track track;
  track.reserve(records_.size());
  for (const auto& r : records_) track.push_back(r.nav);
  for (const auto& seg : reconstruction_->segments) {
    if (seg.gap) continue;
    // reconstructed[0] and reconstructed.back() are the bracketing fixes.
    for (size_t k = seg.first_record; k <= seg.last_record; ++k) {
      track[k] = seg.reconstructed[k - seg.first_record + 1];
    }
  }
  return track;
}

std::string MissionLog::serialize() const {
  std::string out;
  out += kLogHeader;
  out += '\n';
  out += header_line(mission_id_, plan_, field_mode_);
  out += '\n';
  for (const auto& r : records_) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  if (reconstruction_) {
    out += kFinalizedLine;
    out += '\n';
  }
  return out;
}

MissionLog MissionLog::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kLogHeader) {
    throw Error(ErrorCode::ParseError, "missing `seashark-log v1` header line");
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "missing log header document");
  MissionLog log;
  bool finalized = false;
  try {
    const json h = json::parse(line);
    if (h.at("kind") != "header") throw Error(ErrorCode::ParseError, "second line must be the header");
    log.mission_id_ = h.at("mission_id").get<std::string>();
    log.field_mode_ = h.at("field_mode").get<bool>();
    log.plan_ = io::plan_from_json(h.at("plan"));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "record") {
        if (finalized) throw Error(ErrorCode::ParseError, "record after finalization marker");
        LogRecord r = record_from_json(j);
        if (!log.records_.empty() && !(r.sim_time > log.records_.back().sim_time)) {
          throw Error(ErrorCode::TimeOrderViolation, "log records out of order");
        }
        log.records_.push_back(std::move(r));
      } else if (kind == "finalized") {
        finalized = true;
      } else {
        throw Error(ErrorCode::ParseError, "unknown line kind " + kind);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (finalized) log.finalize();
  return log;
}

MissionLog MissionLog::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open log file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void MissionLog::save(const std::string& path) const {
  std::ofstream f(path, std::ios::out | std::ios::trunc);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open log file " + path);
  f << serialize();
  if (!f) throw Error(ErrorCode::ParseError, "log write failed");
}

std::string MissionLog::export_as(ExportFormat format) const {
  switch (format) {
    case ExportFormat::Records:
      return serialize();
    case ExportFormat::Track:
      return nav::export_track_text(merged_track());
    case ExportFormat::GeoTrack:
      return nav::export_geotrack(merged_track(), mission_id_);
  }
  return {};
}

}  // namespace seashark::mlog
