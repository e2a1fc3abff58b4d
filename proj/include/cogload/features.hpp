#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogload/sensor.hpp"

namespace cogload {

struct Feature {
  std::string name;
  Modality group = Modality::pupil;
  double value = 0.0;
};

struct FeatureVector {
  std::string segment_id;
  std::vector<Feature> features;  // canonical order

  std::size_t size() const { return features.size(); }
  // Throws Error(SchemaMismatch) for an unknown name.
  double at(std::string_view name) const;
  std::vector<std::string> names() const;
  std::vector<double> values() const;
};

enum class Schema { unimodal, multimodal };

std::string_view to_string(Schema s);
std::optional<Schema> parse_schema(std::string_view text);

// Maximal monotonic stretch of a sequence, as sample indices [start, end].
// Zero differences extend the run they occur in.
struct Run {
  std::size_t start = 0;
  std::size_t end = 0;
  int direction = 0;  // +1 rising, -1 falling
};

std::vector<Run> decompose_runs(std::span<const double> values);

// Avg/Max/Min for pupil; Avg/SD/Max/Min/Rng for EDA and HR.
std::vector<Feature> stat_features(const SensorSeries& series);

// AvgV, MaxV, MaxC and CF (direction reversals per second).
std::vector<Feature> dynamic_features(const SensorSeries& series);

// Index of pupillary activity from a one-level Haar transform: strict local
// modulus maxima of the detail coefficients above the universal threshold,
// per second. Requires uniform sampling and at least 32 samples.
double ipa(const SensorSeries& pupil);

// IPA over a window that may contain excised stretches: each uniformly
// sampled run of at least 32 samples is scored separately and the event
// counts are pooled over the summed run durations.
double ipa_across_gaps(const SensorSeries& pupil);

// Feature names for a schema, in canonical order.
std::vector<std::string> feature_names(Schema schema, bool include_ipa);
std::vector<Modality> feature_groups(Schema schema, bool include_ipa);

FeatureVector build_feature_vector(const Segment& seg, Schema schema, bool include_ipa);

}  // namespace cogload
