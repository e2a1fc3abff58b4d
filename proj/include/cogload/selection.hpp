#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogload/classifiers.hpp"
#include "cogload/dataset.hpp"
#include "cogload/features.hpp"

namespace cogload {

struct SplitConfig {
  double train_fraction = 0.8;
  bool stratified = true;
  bool group_by_participant = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Throws TooFewSamples below 10 rows, UnsatisfiableStratification when a
// present class has a single row. `groups` may be empty unless grouping.
Split split(std::span<const Level> y, std::span<const std::string> groups, const SplitConfig& cfg);

struct Fold {
  std::vector<std::size_t> fit;
  std::vector<std::size_t> val;
};

// Stratified folds over `train` (indices into y). Throws TooFewSamples when
// k < 2 or there are fewer rows than folds.
std::vector<Fold> kfold(std::span<const std::size_t> train, std::span<const Level> y, int k, std::uint64_t seed);

struct GridSpace {
  std::vector<double> nb_alpha{1.0};
  std::vector<Criterion> dt_criterion{Criterion::gini, Criterion::entropy};
  std::vector<double> svm_linear_C{0.1, 1, 10, 100};
  std::vector<double> svm_rbf_C{0.1, 1, 10, 100};
  std::vector<double> logreg_C{0.1, 1, 10, 100};
  std::vector<int> rf_n_trees{20, 40, 60, 80, 100};

  void validate() const;
  std::size_t total_cells() const;
};

// Grid cells for one kind in canonical order, built on `base` (seed, nb
// variant and other fixed settings).
std::vector<ClassifierSpec> grid_cells(ClassifierKind kind, const GridSpace& grid, const ClassifierSpec& base);

struct CellResult {
  ClassifierSpec spec;
  std::vector<std::optional<double>> fold_kappa;
  std::optional<double> mean_kappa;  // unset when every fold failed
  std::string error;                 // first failure message, if any
};

struct GridResult {
  ClassifierSpec best;
  double best_kappa = 0.0;
  std::vector<CellResult> cells;
};

// Picks the cell with the highest mean validation kappa; the earliest cell
// wins ties. Throws the first cell error when every cell failed.
GridResult grid_search(ClassifierKind kind, const GridSpace& grid, const ClassifierSpec& base, const Matrix& X,
                       std::span<const Level> y, std::span<const Fold> folds, const FeatureSchema& schema = {});

enum class WindowSelection { test_kappa, validation_kappa };

struct SweepConfig {
  std::vector<Schema> schemas{Schema::unimodal, Schema::multimodal};
  std::vector<ClassifierKind> kinds{kAllKinds.begin(), kAllKinds.end()};
  SplitConfig split;
  int cv_folds = 4;
  GridSpace grid;
  WindowSelection selection = WindowSelection::test_kappa;
  NaiveBayesVariant nb_variant = NaiveBayesVariant::categorical;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SweepRow {
  Schema schema = Schema::multimodal;
  ClassifierKind kind = ClassifierKind::rf;
  double window_s = 0.0;
  ClassifierSpec spec;
  double cv_kappa = 0.0;
  double kappa = 0.0;
  double accuracy = 0.0;
  std::size_t n_train = 0;
  std::vector<std::string> test_ids;
  std::vector<Level> truth;
  std::vector<Level> predictions;
  std::vector<CellResult> cells;
  TrainedModel model;
  bool flagged = false;
};

struct SweepSkip {
  Schema schema = Schema::multimodal;
  ClassifierKind kind = ClassifierKind::rf;
  double window_s = 0.0;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // schema, kind, window order
  std::vector<SweepSkip> skipped;

  std::vector<const SweepRow*> flagged() const;
  const SweepRow* flagged(Schema s, ClassifierKind k) const;
};

struct TrainedSelection {
  GridResult grid;
  TrainedModel model;  // best cell refit on every training row
};

// Cross-validated grid search over the `train` rows followed by the final
// fit. Rows outside `train` are never read, labels included.
TrainedSelection train_model(ClassifierKind kind, const SweepConfig& cfg, const Matrix& X, std::span<const Level> y,
                             std::span<const std::size_t> train, const FeatureSchema& schema, double window_s,
                             std::size_t window_index);

// One train/test split is drawn over the union of segments seen at any
// window, so a segment lands on the same side at every window.
SweepResult window_sweep(const std::vector<WindowData>& windows, const SweepConfig& cfg);

}  // namespace cogload
