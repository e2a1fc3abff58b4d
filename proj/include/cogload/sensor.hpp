#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cogload {

enum class Modality { pupil, eda, hr };

std::string_view to_string(Modality m);
std::optional<Modality> parse_modality(std::string_view text);

// Three-level cognitive-load target, ordered low < moderate < high.
enum class Level { low = 0, moderate = 1, high = 2 };

inline constexpr std::array<Level, 3> kLevels = {Level::low, Level::moderate, Level::high};

std::string_view to_string(Level level);
std::optional<Level> parse_level(std::string_view text);

struct Sample {
  double t = 0.0;           // seconds since the session epoch
  double value = 0.0;       // mm, uS or bpm depending on the stream
  double confidence = 1.0;  // pupil only; 1.0 elsewhere
  bool valid = true;
};

struct SensorSeries {
  Modality modality = Modality::pupil;
  double nominal_rate = 0.0;  // Hz
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::size_t valid_count() const;
  // t_last - t_first, or 0 for fewer than two samples.
  double span() const;
};

inline constexpr double kPupilRateHz = 200.0;
inline constexpr double kEdaRateHz = 4.0;
inline constexpr double kHrRateHz = 0.1;  // one value per 10 s span

SensorSeries make_series(Modality m);

struct BlinkEvent {
  double onset = 0.0;
  double offset = 0.0;
};

// Questionnaire answers in file order: i1 i2 i3 (intrinsic), e1 e2
// (extraneous), g1 g2 (germane), cl (overall cognitive load).
inline constexpr std::size_t kReportItems = 8;

struct ReportEvent {
  double start = 0.0;
  double end = 0.0;
  std::array<int, kReportItems> items{};
};

struct Session {
  std::string participant_id;
  double epoch = 0.0;  // wall-clock seconds of t = 0; informational only
  SensorSeries pupil = make_series(Modality::pupil);
  std::vector<BlinkEvent> blinks;
  SensorSeries eda = make_series(Modality::eda);
  SensorSeries hr = make_series(Modality::hr);
  std::vector<ReportEvent> reports;

  const SensorSeries& stream(Modality m) const;
  // Latest timestamp across all streams and report ends.
  double end_time() const;
};

// Loads a session from its manifest.json. Streams are sorted by time and
// duplicate timestamps collapse to the row that appears last in the file.
//
// Throws Error with MissingFile, MissingData (empty pupil/eda/hr/reports
// stream), MalformedRow (bad header, field count, number, or invariant) or
// NonMonotonicClock (more than max(1, 1%) of rows step backwards in time).
Session load_session(const std::filesystem::path& manifest_path);

// Writes manifest.json plus the five stream CSVs into `dir`. Values are
// written in shortest round-trip form so load_session reproduces the session
// exactly. A non-empty `comment` is written as a leading '#' line in each CSV.
void save_session(const Session& session, const std::filesystem::path& dir,
                  std::string_view comment = {});

struct StreamCoverage {
  std::size_t samples = 0;
  double coverage = 0.0;  // fraction of the session duration not inside a gap
  std::size_t gap_count = 0;
  // Gap counts keyed by duration bucket: "<1s", "1-10s", "10-60s", ">=60s".
  std::map<std::string, std::size_t> gap_histogram;
};

struct ValidationOptions {
  double min_confidence = 0.65;
  double expected_report_period_s = 300.0;
  double cadence_tolerance_s = 150.0;
};

struct ValidationReport {
  double duration_s = 0.0;
  StreamCoverage pupil;
  StreamCoverage eda;
  StreamCoverage hr;
  std::size_t low_confidence_count = 0;
  double low_confidence_fraction = 0.0;
  std::size_t blink_count = 0;
  std::size_t report_count = 0;
  // Per report: true when it started within the cadence tolerance of the
  // expected period after the previous report (or the session start).
  std::vector<bool> expected_cadence;
  std::size_t expected_cadence_count = 0;
};

// A gap is any stretch longer than two nominal sample periods without a
// sample, including the stretches before the first and after the last sample.
ValidationReport validate_session(const Session& session, const ValidationOptions& options = {});

struct Segment {
  std::string participant_id;
  std::size_t report_index = 0;
  double window_s = 0.0;
  SensorSeries pupil = make_series(Modality::pupil);
  SensorSeries eda = make_series(Modality::eda);
  SensorSeries hr = make_series(Modality::hr);
  std::optional<Level> label;

  std::string id() const;
  const SensorSeries& stream(Modality m) const;
};

std::string segment_id(std::string_view participant_id, std::size_t report_index);

// Minimum number of samples a stream needs for a window to be kept.
std::size_t min_window_samples(Modality m, double window_s, double nominal_rate);

struct SkippedWindow {
  std::string participant_id;
  std::size_t report_index = 0;
  double window_s = 0.0;
  std::string reason;
};

struct Segmentation {
  std::vector<Segment> segments;
  std::vector<SkippedWindow> skipped;
};

// One segment per report: samples with t in [start - window_s, start) that
// do not fall inside any report's [start, end]. Windows below the per-stream
// minimum are dropped and listed in `skipped`.
Segmentation segment_windows(const Session& session, double window_s);

}  // namespace cogload
