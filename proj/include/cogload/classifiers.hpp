#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cogload/matrix.hpp"
#include "cogload/sensor.hpp"

namespace cogload {

enum class ClassifierKind { nb, dt, svm_linear, svm_rbf, logreg, rf };

inline constexpr std::array<ClassifierKind, 6> kAllKinds = {
    ClassifierKind::nb,     ClassifierKind::dt,     ClassifierKind::svm_linear,
    ClassifierKind::svm_rbf, ClassifierKind::logreg, ClassifierKind::rf};

std::string_view to_string(ClassifierKind k);
std::optional<ClassifierKind> parse_kind(std::string_view text);

enum class Criterion { gini, entropy };
std::string_view to_string(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view text);

enum class NaiveBayesVariant { categorical, gaussian };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::rf;
  double alpha = 1.0;  // nb additive smoothing
  NaiveBayesVariant nb_variant = NaiveBayesVariant::categorical;
  int nb_bins = 10;
  Criterion criterion = Criterion::gini;  // dt, rf
  double C = 1.0;                          // svm_linear, svm_rbf, logreg
  std::optional<double> gamma;             // svm_rbf; unset uses 1 / (p * mean variance)
  int n_trees = 100;                       // rf
  std::uint64_t seed = 0;

  // The tuned hyperparameter(s) only, e.g. "C=10" or "criterion=gini".
  std::string describe() const;
  void validate() const;

  bool operator==(const ClassifierSpec&) const = default;
};

// z-scores features with training means and sample standard deviations.
// Zero-variance columns pass through unchanged.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  // 0 marks a pass-through column

  Matrix apply(const Matrix& X) const;
  Matrix invert(const Matrix& Z) const;

  bool operator==(const Standardizer&) const = default;
};

Standardizer standardize_fit(const Matrix& X);
Matrix standardize_apply(const Standardizer& s, const Matrix& X);

struct TreeNode {
  int feature = -1;  // -1 for leaves; an internal column index otherwise
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::array<double, 3> counts{};  // training samples per class reaching the node
  double impurity = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  // Index of the leaf reached by an (internally ordered) feature row.
  std::size_t leaf(std::span<const double> x) const;
};

struct NaiveBayesParams {
  NaiveBayesVariant variant = NaiveBayesVariant::categorical;
  std::array<double, 3> log_prior{};
  // categorical: per feature, ascending interior bin edges; and
  // log_likelihood[class][feature][bin]
  std::vector<std::vector<double>> edges;
  std::vector<std::vector<std::vector<double>>> log_likelihood;
  // gaussian: per class and feature
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> var;
};

struct TreeParams {
  Tree tree;
};

// One weight row and bias per class; used by logistic regression and the
// linear SVM. Rows of absent classes are unused.
struct LinearParams {
  std::vector<std::vector<double>> weights;
  std::array<double, 3> bias{};
};

struct KernelSvmParams {
  double gamma = 1.0;
  Matrix support;                          // support vectors, internal column order
  std::vector<std::vector<double>> coef;   // per class: alpha_i * y_i for each support vector
  std::array<double, 3> bias{};
};

struct ForestParams {
  std::vector<Tree> trees;
};

using ModelParams = std::variant<NaiveBayesParams, TreeParams, LinearParams, KernelSvmParams, ForestParams>;

struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<Modality> groups;
};

struct TrainedModel {
  ClassifierSpec spec;
  FeatureSchema schema;
  double window_s = 0.0;
  // Columns are internally reordered by their training contents so fitted
  // models do not depend on the order features were presented in.
  std::vector<std::size_t> feature_order;
  std::optional<Standardizer> standardizer;  // svm and logreg only
  std::array<bool, 3> class_present{};
  ModelParams params;
  bool converged = true;
};

// Throws DegenerateLabels (fewer than two classes), NonFiniteInput,
// LengthMismatch, SchemaMismatch (schema size differs from X) or
// InvalidParams.
TrainedModel fit(const ClassifierSpec& spec, const Matrix& X, std::span<const Level> y, FeatureSchema schema = {},
                 double window_s = 0.0);

// Per-class scores (rows x 3). Absent classes score -infinity. Tree models
// give class fractions (leaf counts or votes), NB posterior probabilities,
// SVMs decision values and logistic regression probabilities.
Matrix decision_scores(const TrainedModel& m, const Matrix& X);

// Argmax of decision_scores; ties go to the earlier class in low, moderate,
// high order. Throws SchemaMismatch when X has the wrong width.
std::vector<Level> predict(const TrainedModel& m, const Matrix& X);

struct ImportanceReport {
  std::vector<std::string> features;
  std::vector<Modality> groups;
  std::vector<double> importance;   // non-negative, sums to 1
  std::array<double, 3> group_percent{};  // pupil, eda, hr; sums to 100
};

// Mean decrease in impurity per feature, normalized per tree and averaged.
// Throws WrongKind for anything but a random forest.
ImportanceReport gini_importance(const TrainedModel& m);

nlohmann::ordered_json to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const TrainedModel& m, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace cogload
