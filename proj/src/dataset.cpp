#include "cogload/dataset.hpp"

#include "cogload/error.hpp"

namespace cogload {

namespace {

constexpr std::array<Schema, 2> kSchemas = {Schema::unimodal, Schema::multimodal};

}  // namespace

DatasetBuilder::DatasetBuilder(std::vector<double> windows, LabelConfig labels, FeatureConfig features)
    : labels_(std::move(labels)), features_(features) {
  labels_.edges.validate();
  labels_.mapping.validate();
  for (double w : windows) {
    WindowData d;
    d.window_s = w;
    for (auto s : kSchemas) {
      const auto i = static_cast<std::size_t>(s);
      d.schema[i].names = feature_names(s, features_.include_ipa(s));
      d.schema[i].groups = feature_groups(s, features_.include_ipa(s));
      d.X[i] = Matrix(0, d.schema[i].names.size());
    }
    data_.push_back(std::move(d));
  }
}

void DatasetBuilder::add(const Session& cleaned) {
  for (auto& d : data_) {
    auto seg = segment_windows(cleaned, d.window_s);
    for (auto& s : seg.skipped) skipped_.push_back(std::move(s));
    for (const auto& segment : seg.segments) {
      const auto level = discretize(score_questionnaire(cleaned.reports[segment.report_index], labels_.mapping),
                                    labels_.edges);
      std::array<FeatureVector, 2> fv;
      try {
        for (auto s : kSchemas) {
          fv[static_cast<std::size_t>(s)] = build_feature_vector(segment, s, features_.include_ipa(s));
        }
      } catch (const Error& e) {
        skipped_.push_back({segment.participant_id, segment.report_index, d.window_s, e.what()});
        continue;
      }
      d.ids.push_back(segment.id());
      d.participants.push_back(segment.participant_id);
      d.labels.push_back(level);
      for (std::size_t i = 0; i < 2; ++i) d.X[i].append_row(fv[i].values());
    }
  }
}

void DatasetBuilder::append(DatasetBuilder&& other) {
  if (other.data_.size() != data_.size()) throw Error(ErrorCode::InvalidArgument, "window lists differ");
  for (std::size_t w = 0; w < data_.size(); ++w) {
    auto& d = data_[w];
    auto& o = other.data_[w];
    if (d.window_s != o.window_s) throw Error(ErrorCode::InvalidArgument, "window lists differ");
    d.ids.insert(d.ids.end(), o.ids.begin(), o.ids.end());
    d.participants.insert(d.participants.end(), o.participants.begin(), o.participants.end());
    d.labels.insert(d.labels.end(), o.labels.begin(), o.labels.end());
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t r = 0; r < o.X[i].rows(); ++r) d.X[i].append_row(o.X[i].row(r));
    }
  }
  for (auto& s : other.skipped_) skipped_.push_back(std::move(s));
}

}  // namespace cogload
