#include "cogload/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "cogload/csv.hpp"
#include "cogload/error.hpp"

namespace cogload {

namespace fs = std::filesystem;

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::pupil: return "pupil";
    case Modality::eda: return "eda";
    case Modality::hr: return "hr";
  }
  return "unknown";
}

std::optional<Modality> parse_modality(std::string_view text) {
  if (text == "pupil") return Modality::pupil;
  if (text == "eda") return Modality::eda;
  if (text == "hr") return Modality::hr;
  return std::nullopt;
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::low: return "low";
    case Level::moderate: return "moderate";
    case Level::high: return "high";
  }
  return "unknown";
}

std::optional<Level> parse_level(std::string_view text) {
  if (text == "low") return Level::low;
  if (text == "moderate") return Level::moderate;
  if (text == "high") return Level::high;
  return std::nullopt;
}

std::size_t SensorSeries::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const Sample& s) { return s.valid; }));
}

double SensorSeries::span() const {
  if (samples.size() < 2) return 0.0;
  return samples.back().t - samples.front().t;
}

SensorSeries make_series(Modality m) {
  switch (m) {
    case Modality::pupil: return {m, kPupilRateHz, {}};
    case Modality::eda: return {m, kEdaRateHz, {}};
    case Modality::hr: return {m, kHrRateHz, {}};
  }
  return {m, 1.0, {}};
}

const SensorSeries& Session::stream(Modality m) const {
  switch (m) {
    case Modality::pupil: return pupil;
    case Modality::eda: return eda;
    case Modality::hr: return hr;
  }
  return pupil;
}

double Session::end_time() const {
  double end = 0.0;
  for (const auto* s : {&pupil, &eda, &hr}) {
    if (!s->empty()) end = std::max(end, s->samples.back().t);
  }
  for (const auto& r : reports) end = std::max(end, r.end);
  return end;
}

const SensorSeries& Segment::stream(Modality m) const {
  switch (m) {
    case Modality::pupil: return pupil;
    case Modality::eda: return eda;
    case Modality::hr: return hr;
  }
  return pupil;
}

std::string segment_id(std::string_view participant_id, std::size_t report_index) {
  return std::string(participant_id) + "#" + std::to_string(report_index);
}

std::string Segment::id() const { return segment_id(participant_id, report_index); }

// ---------------------------------------------------------------------------
// Loading

namespace {

[[noreturn]] void malformed(const fs::path& file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedRow, file.string() + ":" + std::to_string(line) + ": " + what);
}

csv::Table read_with_header(const fs::path& file, const std::vector<std::string>& expected) {
  if (!fs::exists(file)) throw Error(ErrorCode::MissingFile, file.string());
  csv::Table table = csv::read(file);
  if (table.header.empty()) return table;
  if (table.header != expected) {
    malformed(file, 1, "expected header '" + csv::join(expected) + "', got '" + csv::join(table.header) + "'");
  }
  for (const auto& row : table.rows) {
    if (row.fields.size() != expected.size()) {
      malformed(file, row.line, "expected " + std::to_string(expected.size()) + " fields, got " +
                                    std::to_string(row.fields.size()));
    }
  }
  return table;
}

double number(const csv::Table& table, const csv::Row& row, std::size_t col) {
  auto v = csv::parse_double(row.fields[col]);
  if (!v || !std::isfinite(*v)) {
    malformed(table.path, row.line, "column '" + table.header[col] + "' is not a finite number");
  }
  return *v;
}

struct RawSample {
  Sample sample;
  std::size_t line = 0;
};

// Sorts by time (stable, so file order breaks ties) and keeps the last row of
// every duplicate timestamp.
std::vector<Sample> normalize_clock(const fs::path& file, std::vector<RawSample> raw) {
  std::size_t descents = 0;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].sample.t < raw[i - 1].sample.t) ++descents;
  }
  const std::size_t allowed =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(0.01 * static_cast<double>(raw.size()))));
  if (descents > allowed) {
    throw Error(ErrorCode::NonMonotonicClock, file.string() + ": " + std::to_string(descents) + " of " +
                                                  std::to_string(raw.size()) + " rows out of order");
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawSample& a, const RawSample& b) { return a.sample.t < b.sample.t; });
  std::vector<Sample> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i + 1 < raw.size() && raw[i + 1].sample.t == raw[i].sample.t) continue;
    out.push_back(raw[i].sample);
  }
  return out;
}

void check_time(const csv::Table& table, const csv::Row& row, double t) {
  if (t < 0.0) malformed(table.path, row.line, "negative timestamp");
}

SensorSeries load_pupil(const fs::path& file) {
  auto table = read_with_header(file, {"t", "diameter_mm", "confidence"});
  if (table.rows.empty()) throw Error(ErrorCode::MissingData, "pupil (" + file.string() + ")");
  std::vector<RawSample> raw;
  raw.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    RawSample r;
    r.sample.t = number(table, row, 0);
    check_time(table, row, r.sample.t);
    r.sample.value = number(table, row, 1);
    r.sample.confidence = number(table, row, 2);
    if (r.sample.confidence < 0.0 || r.sample.confidence > 1.0) {
      malformed(file, row.line, "confidence outside [0,1]");
    }
    r.line = row.line;
    raw.push_back(r);
  }
  SensorSeries s = make_series(Modality::pupil);
  s.samples = normalize_clock(file, std::move(raw));
  return s;
}

SensorSeries load_scalar(const fs::path& file, Modality m, const std::string& value_column) {
  auto table = read_with_header(file, {"t", value_column});
  if (table.rows.empty()) {
    throw Error(ErrorCode::MissingData, std::string(to_string(m)) + " (" + file.string() + ")");
  }
  std::vector<RawSample> raw;
  raw.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    RawSample r;
    r.sample.t = number(table, row, 0);
    check_time(table, row, r.sample.t);
    r.sample.value = number(table, row, 1);
    r.line = row.line;
    raw.push_back(r);
  }
  SensorSeries s = make_series(m);
  s.samples = normalize_clock(file, std::move(raw));
  return s;
}

std::vector<BlinkEvent> load_blinks(const fs::path& file) {
  auto table = read_with_header(file, {"onset", "offset"});
  std::vector<BlinkEvent> blinks;
  blinks.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    BlinkEvent b{number(table, row, 0), number(table, row, 1)};
    if (b.onset > b.offset) malformed(file, row.line, "blink onset after offset");
    blinks.push_back(b);
  }
  std::stable_sort(blinks.begin(), blinks.end(),
                   [](const BlinkEvent& a, const BlinkEvent& b) { return a.onset < b.onset; });
  return blinks;
}

const std::vector<std::string> kReportHeader = {"start", "end", "i1", "i2", "i3", "e1", "e2", "g1", "g2", "cl"};

std::vector<ReportEvent> load_reports(const fs::path& file) {
  auto table = read_with_header(file, kReportHeader);
  if (table.rows.empty()) throw Error(ErrorCode::MissingData, "reports (" + file.string() + ")");
  std::vector<std::pair<ReportEvent, std::size_t>> reports;
  for (const auto& row : table.rows) {
    ReportEvent r;
    r.start = number(table, row, 0);
    r.end = number(table, row, 1);
    if (!(r.start < r.end)) malformed(file, row.line, "report start must precede end");
    for (std::size_t i = 0; i < kReportItems; ++i) {
      auto v = csv::parse_int(row.fields[2 + i]);
      if (!v || *v < 1 || *v > 10) malformed(file, row.line, "item '" + table.header[2 + i] + "' not in 1..10");
      r.items[i] = static_cast<int>(*v);
    }
    reports.emplace_back(r, row.line);
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const auto& a, const auto& b) { return a.first.start < b.first.start; });
  std::vector<ReportEvent> out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i > 0 && reports[i].first.start <= reports[i - 1].first.end) {
      malformed(file, reports[i].second, "report overlaps the previous report");
    }
    out.push_back(reports[i].first);
  }
  return out;
}

std::string manifest_string(const nlohmann::json& j, const fs::path& manifest, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(ErrorCode::MalformedRow, manifest.string() + ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

Session load_session(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::MissingFile, manifest_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRow, manifest_path.string() + ": " + e.what());
  }
  const fs::path dir = manifest_path.parent_path();
  auto resolve = [&](const char* key) {
    fs::path p = manifest_string(j, manifest_path, key);
    return p.is_absolute() ? p : dir / p;
  };

  Session s;
  s.participant_id = manifest_string(j, manifest_path, "participant_id");
  if (j.contains("epoch")) {
    if (!j["epoch"].is_number()) {
      throw Error(ErrorCode::MalformedRow, manifest_path.string() + ": 'epoch' must be a number");
    }
    s.epoch = j["epoch"].get<double>();
  }
  s.pupil = load_pupil(resolve("pupil_csv"));
  s.blinks = load_blinks(resolve("blinks_csv"));
  s.eda = load_scalar(resolve("eda_csv"), Modality::eda, "eda_us");
  s.hr = load_scalar(resolve("hr_csv"), Modality::hr, "bpm");
  s.reports = load_reports(resolve("reports_csv"));
  return s;
}

void save_session(const Session& session, const fs::path& dir, std::string_view comment) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::MissingFile, (dir / name).string());
    if (!comment.empty()) out << "# " << comment << '\n';
    return out;
  };
  using csv::format_double;
  {
    auto out = open("pupil.csv");
    out << "t,diameter_mm,confidence\n";
    for (const auto& x : session.pupil.samples) {
      out << format_double(x.t) << ',' << format_double(x.value) << ',' << format_double(x.confidence) << '\n';
    }
  }
  {
    auto out = open("blinks.csv");
    out << "onset,offset\n";
    for (const auto& b : session.blinks) out << format_double(b.onset) << ',' << format_double(b.offset) << '\n';
  }
  {
    auto out = open("eda.csv");
    out << "t,eda_us\n";
    for (const auto& x : session.eda.samples) out << format_double(x.t) << ',' << format_double(x.value) << '\n';
  }
  {
    auto out = open("hr.csv");
    out << "t,bpm\n";
    for (const auto& x : session.hr.samples) out << format_double(x.t) << ',' << format_double(x.value) << '\n';
  }
  {
    auto out = open("reports.csv");
    out << csv::join(kReportHeader) << '\n';
    for (const auto& r : session.reports) {
      out << format_double(r.start) << ',' << format_double(r.end);
      for (int item : r.items) out << ',' << item;
      out << '\n';
    }
  }
  nlohmann::ordered_json j;
  j["participant_id"] = session.participant_id;
  j["pupil_csv"] = "pupil.csv";
  j["blinks_csv"] = "blinks.csv";
  j["eda_csv"] = "eda.csv";
  j["hr_csv"] = "hr.csv";
  j["reports_csv"] = "reports.csv";
  j["epoch"] = session.epoch;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, (dir / "manifest.json").string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string gap_bucket(double length) {
  if (length < 1.0) return "<1s";
  if (length < 10.0) return "1-10s";
  if (length < 60.0) return "10-60s";
  return ">=60s";
}

StreamCoverage coverage_of(const SensorSeries& s, double duration) {
  StreamCoverage c;
  c.samples = s.size();
  for (const char* bucket : {"<1s", "1-10s", "10-60s", ">=60s"}) c.gap_histogram[bucket] = 0;
  if (duration <= 0.0) return c;
  if (s.empty()) {
    c.coverage = 0.0;
    c.gap_count = 1;
    c.gap_histogram[gap_bucket(duration)] += 1;
    return c;
  }
  const double threshold = 2.0 / s.nominal_rate;
  double gap_total = 0.0;
  auto add_gap = [&](double length) {
    if (length <= threshold) return;
    gap_total += length;
    ++c.gap_count;
    c.gap_histogram[gap_bucket(length)] += 1;
  };
  add_gap(s.samples.front().t);
  for (std::size_t i = 1; i < s.size(); ++i) add_gap(s.samples[i].t - s.samples[i - 1].t);
  add_gap(duration - s.samples.back().t);
  c.coverage = std::clamp(1.0 - gap_total / duration, 0.0, 1.0);
  return c;
}

}  // namespace

ValidationReport validate_session(const Session& session, const ValidationOptions& options) {
  ValidationReport r;
  r.duration_s = session.end_time();
  r.pupil = coverage_of(session.pupil, r.duration_s);
  r.eda = coverage_of(session.eda, r.duration_s);
  r.hr = coverage_of(session.hr, r.duration_s);
  for (const auto& x : session.pupil.samples) {
    if (x.confidence < options.min_confidence) ++r.low_confidence_count;
  }
  if (!session.pupil.empty()) {
    r.low_confidence_fraction =
        static_cast<double>(r.low_confidence_count) / static_cast<double>(session.pupil.size());
  }
  r.blink_count = session.blinks.size();
  r.report_count = session.reports.size();
  double previous = 0.0;
  for (const auto& rep : session.reports) {
    const bool ok = std::abs((rep.start - previous) - options.expected_report_period_s) <= options.cadence_tolerance_s;
    r.expected_cadence.push_back(ok);
    if (ok) ++r.expected_cadence_count;
    previous = rep.start;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Segmentation

std::size_t min_window_samples(Modality m, double window_s, double nominal_rate) {
  switch (m) {
    case Modality::pupil:
    case Modality::eda:
      return static_cast<std::size_t>(std::ceil(0.5 * window_s * nominal_rate));
    case Modality::hr:
      // dynamic features need three points
      return 3;
  }
  return 0;
}

namespace {

SensorSeries slice(const SensorSeries& s, double lo, double hi, const std::vector<ReportEvent>& reports) {
  SensorSeries out{s.modality, s.nominal_rate, {}};
  auto first = std::lower_bound(s.samples.begin(), s.samples.end(), lo,
                                [](const Sample& x, double t) { return x.t < t; });
  // Reports that can intersect [lo, hi): sorted and disjoint, so a moving
  // cursor suffices.
  auto rep = std::lower_bound(reports.begin(), reports.end(), lo,
                              [](const ReportEvent& r, double t) { return r.end < t; });
  for (auto it = first; it != s.samples.end() && it->t < hi; ++it) {
    while (rep != reports.end() && rep->end < it->t) ++rep;
    if (rep != reports.end() && rep->start <= it->t && it->t <= rep->end) continue;
    out.samples.push_back(*it);
  }
  return out;
}

}  // namespace

Segmentation segment_windows(const Session& session, double window_s) {
  if (!(window_s > 0.0) || !std::isfinite(window_s)) {
    throw Error(ErrorCode::InvalidArgument, "window_s must be positive");
  }
  Segmentation result;
  for (std::size_t k = 0; k < session.reports.size(); ++k) {
    const double hi = session.reports[k].start;
    const double lo = hi - window_s;
    Segment seg;
    seg.participant_id = session.participant_id;
    seg.report_index = k;
    seg.window_s = window_s;
    seg.pupil = slice(session.pupil, lo, hi, session.reports);
    seg.eda = slice(session.eda, lo, hi, session.reports);
    seg.hr = slice(session.hr, lo, hi, session.reports);

    std::string reason;
    for (Modality m : {Modality::pupil, Modality::eda, Modality::hr}) {
      const auto& s = seg.stream(m);
      const std::size_t need = min_window_samples(m, window_s, session.stream(m).nominal_rate);
      if (s.size() < need) {
        if (!reason.empty()) reason += "; ";
        reason += std::string(to_string(m)) + " " + std::to_string(s.size()) + " < " + std::to_string(need);
      }
    }
    if (!reason.empty()) {
      result.skipped.push_back({session.participant_id, k, window_s, reason});
      continue;
    }
    result.segments.push_back(std::move(seg));
  }
  return result;
}

}  // namespace cogload
