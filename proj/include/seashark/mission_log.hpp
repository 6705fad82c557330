#pragma once

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seashark/control.hpp"
#include "seashark/envsim.hpp"
#include "seashark/executor.hpp"
#include "seashark/mission_plan.hpp"
#include "seashark/navigation.hpp"

namespace seashark::mlog {

inline constexpr std::string_view kLogHeader = "seashark-log v1";

/// One control tick.
struct LogRecord {
  double sim_time = 0.0;
  exec::ExecPhase phase = exec::ExecPhase::Idle;
  int line_index = 0;
  std::optional<sim::VehicleState> truth;  // absent in field mode
  sim::SensorFrame frame;
  control::NavReference applied;
  nav::NavEstimate nav;
  std::vector<std::string> notes;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// One submerged stretch between two surface fixes.
struct UnderwaterSegment {
  size_t first_record = 0;  // first record without GNSS
  size_t last_record = 0;   // last record without GNSS
  std::optional<nav::NavEstimate> fix_before;
  std::optional<nav::NavEstimate> fix_after;
  bool gap = false;  // a bracketing fix is missing; the segment is left as dead reckoned
  nav::Track dead_reckoned;  // fix_before .. fix_after, re-run from logged compass
  nav::Track reconstructed;
  std::optional<nav::Drift> drift;

  friend bool operator==(const UnderwaterSegment&, const UnderwaterSegment&) = default;
};

struct Reconstruction {
  std::vector<UnderwaterSegment> segments;

  friend bool operator==(const Reconstruction&, const Reconstruction&) = default;
};

/// The `{"kind":"record",...}` document used on each log line and by quickview.
nlohmann::json record_to_json(const LogRecord& record);
/// Throws ParseError.
LogRecord record_from_json(const nlohmann::json& j);

enum class ExportFormat { Track, Records, GeoTrack };
ExportFormat export_format_from_string(std::string_view s);

class MissionLog {
 public:
  MissionLog() = default;
  MissionLog(std::string mission_id, plan::MissionPlan plan, bool field_mode = false);

  const std::string& mission_id() const { return mission_id_; }
  const plan::MissionPlan& plan() const { return plan_; }
  bool field_mode() const { return field_mode_; }
  const std::vector<LogRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const std::optional<Reconstruction>& reconstruction() const { return reconstruction_; }
  bool finalized() const { return reconstruction_.has_value(); }

  /// Throws TimeOrderViolation unless record.sim_time exceeds the last time.
  /// The truth snapshot is dropped in field mode. With a sink attached the
  /// line is flushed before returning.
  void append(LogRecord record);

  /// Streams every appended record to `path` (header first). Throws ParseError on I/O failure.
  void attach_file(const std::string& path);

  /// Surface GNSS fixes in record order.
  std::vector<nav::NavEstimate> gnss_fixes() const;

  /// Floor lookup: greatest sim_time <= t, clamped to the first record.
  /// Throws InvalidState on an empty log.
  const LogRecord& quickview_at(double t) const;
  size_t quickview_index(double t) const;

  /// Splits underwater stretches and reconstructs each bracketed one.
  void finalize();

  /// Records: full line-delimited dump. Track/GeoTrack need finalize(),
  /// otherwise ReconstructionMissing.
  std::string export_as(ExportFormat format) const;

  /// Best available track: GNSS at the surface, reconstructed underwater,
  /// dead reckoned across flagged gaps.
  nav::Track merged_track() const;

  std::string serialize() const;
  static MissionLog parse(std::string_view text);
  static MissionLog load(const std::string& path);
  void save(const std::string& path) const;

  /// Field-for-field comparison; the attached file is not part of the value.
  friend bool operator==(const MissionLog& a, const MissionLog& b);

 private:
  struct FileSink;

  std::string mission_id_;
  plan::MissionPlan plan_;
  bool field_mode_ = false;
  std::vector<LogRecord> records_;
  std::optional<Reconstruction> reconstruction_;
  std::shared_ptr<FileSink> sink_;
};

/// Underwater segments of a record sequence with their dead-reckoned tracks,
/// before any correction.
std::vector<UnderwaterSegment> find_segments(const std::vector<LogRecord>& records);

}  // namespace seashark::mlog
