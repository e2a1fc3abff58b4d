#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cogload/config.hpp"
#include "cogload/selection.hpp"
#include "cogload/stats.hpp"
#include "cogload/synth.hpp"

namespace cogload {

struct RunOptions {
  std::filesystem::path data_dir;
  std::filesystem::path out_dir;
  unsigned jobs = 1;
  std::ostream* log = nullptr;
};

// Manifests under data_dir (the directory itself or its immediate
// subdirectories), sorted by path.
std::vector<std::filesystem::path> find_manifests(const std::filesystem::path& data_dir);

struct Datasets {
  std::size_t sessions = 0;
  std::vector<WindowData> windows;
  std::vector<SkippedWindow> skipped;
};

// Loads, cleans and featurizes every session, `jobs` sessions at a time.
Datasets build_datasets(const std::vector<std::filesystem::path>& manifests, const PipelineConfig& cfg,
                        unsigned jobs);
Datasets build_datasets(const std::vector<SyntheticSession>& cohort, const PipelineConfig& cfg, unsigned jobs);

// Test-set predictions of one model, keyed by segment id.
struct PredictionSet {
  std::string model;
  std::vector<std::string> ids;
  std::vector<Level> truth;
  std::vector<Level> predictions;
};

PredictionSet predictions_of(const SweepRow& row);
std::string model_name(Schema s, ClassifierKind k);

// Restricts both sets to their shared segment ids, in a's order. Throws
// SchemaMismatch when the truth labels disagree on a shared segment.
std::pair<PredictionSet, PredictionSet> align(const PredictionSet& a, const PredictionSet& b);

struct Comparison {
  std::string model_a;
  std::string model_b;
  std::size_t n = 0;
  TestResult result;
};

Comparison compare(const PredictionSet& a, const PredictionSet& b, McNemarOptions opt);

struct CochranSummary {
  std::string group;
  std::size_t k = 0;
  std::size_t n = 0;
  TestResult result;
};

// Models are restricted to the segments all of them share.
CochranSummary cochran(const std::string& group, const std::vector<PredictionSet>& models);

std::string provenance(const std::string& hash, std::uint64_t seed);

void write_predictions(const PredictionSet& p, const std::filesystem::path& path, const std::string& comment);
PredictionSet load_predictions(const std::filesystem::path& path);

struct RunResult {
  Datasets data;
  SweepResult sweep;
  std::vector<Comparison> comparisons;
  std::vector<CochranSummary> cochran;
  std::vector<std::pair<std::string, ImportanceReport>> importances;
};

// Sweep plus paired tests and importances, without touching the disk.
RunResult analyze(Datasets data, const PipelineConfig& cfg, unsigned jobs);

// Full run: writes sweep.csv, sweep_cells.csv, grid_cells.csv,
// predictions_*.csv, comparisons.csv, cochran.csv, importances.csv,
// skipped.csv, models/*.json and report.md. An INCOMPLETE marker stays in
// out_dir unless every output was written and checked.
RunResult run_pipeline(const PipelineConfig& cfg, const RunOptions& opt);

// features.csv (segment_id,participant_id,window_s,label,<features>) and
// skipped.csv. Returns the number of feature rows.
std::size_t extract_features(const PipelineConfig& cfg, Schema schema, const RunOptions& opt);

// metrics.csv, comparisons.csv and cochran.csv over prediction files.
void run_stats(const std::vector<std::filesystem::path>& files, const std::filesystem::path& out_dir,
               McNemarOptions opt);

// <out>/<participant>/ session files plus truth.csv, and params.json.
void write_cohort(const GeneratorParams& p, const std::filesystem::path& out_dir, unsigned jobs);

}  // namespace cogload
