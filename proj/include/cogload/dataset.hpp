#pragma once

#include <array>
#include <string>
#include <vector>

#include "cogload/classifiers.hpp"
#include "cogload/features.hpp"
#include "cogload/labels.hpp"
#include "cogload/matrix.hpp"
#include "cogload/sensor.hpp"

namespace cogload {

struct LabelConfig {
  LevelEdges edges;
  ItemMapping mapping;
};

struct FeatureConfig {
  bool unimodal_include_ipa = true;
  bool multimodal_include_ipa = false;

  bool include_ipa(Schema s) const { return s == Schema::unimodal ? unimodal_include_ipa : multimodal_include_ipa; }
};

// Labeled feature rows of every segment at one window length. Both schemas
// share the same rows so their predictions can be paired.
struct WindowData {
  double window_s = 0.0;
  std::vector<std::string> ids;
  std::vector<std::string> participants;
  std::vector<Level> labels;
  std::array<Matrix, 2> X;  // indexed by Schema
  std::array<FeatureSchema, 2> schema;

  std::size_t size() const { return ids.size(); }
  const Matrix& matrix(Schema s) const { return X[static_cast<std::size_t>(s)]; }
  const FeatureSchema& features(Schema s) const { return schema[static_cast<std::size_t>(s)]; }
};

// Accumulates cleaned sessions one at a time so raw streams never need to be
// held together in memory.
class DatasetBuilder {
 public:
  DatasetBuilder(std::vector<double> windows, LabelConfig labels, FeatureConfig features);

  void add(const Session& cleaned);
  // Merges another builder's rows after this one's (same windows required).
  void append(DatasetBuilder&& other);

  const std::vector<WindowData>& windows() const { return data_; }
  const std::vector<SkippedWindow>& skipped() const { return skipped_; }
  std::vector<WindowData> take() { return std::move(data_); }

 private:
  LabelConfig labels_;
  FeatureConfig features_;
  std::vector<WindowData> data_;
  std::vector<SkippedWindow> skipped_;
};

}  // namespace cogload
