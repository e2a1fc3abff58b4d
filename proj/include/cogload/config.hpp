#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogload/dataset.hpp"
#include "cogload/preprocess.hpp"
#include "cogload/selection.hpp"

namespace cogload {

struct PipelineConfig {
  CleaningConfig cleaning;
  LabelConfig labels;
  FeatureConfig features;
  std::vector<Schema> schemas{Schema::unimodal, Schema::multimodal};
  std::vector<ClassifierKind> kinds{kAllKinds.begin(), kAllKinds.end()};
  SplitConfig split;
  int cv_folds = 4;
  GridSpace grid;
  std::vector<double> windows{30, 60, 90, 120, 150, 180, 210};
  WindowSelection window_selection = WindowSelection::test_kappa;
  NaiveBayesVariant nb_variant = NaiveBayesVariant::categorical;
  bool mcnemar_continuity_correction = true;
  std::uint64_t seed = 0;
  std::string output_dir = "cogload-out";

  // Throws InvalidConfig naming the offending field.
  void validate() const;
  SweepConfig sweep(unsigned jobs) const;
};

// Missing keys keep their defaults; unknown keys and wrong types throw
// InvalidConfig naming the dotted key path.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const PipelineConfig& c);
PipelineConfig load_config(const std::filesystem::path& path);

// 64-bit FNV-1a of a compact JSON dump, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);
std::string config_hash(const PipelineConfig& c);

std::string_view to_string(WindowSelection w);

}  // namespace cogload
