#include "cogload/labels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cogload/error.hpp"

namespace cogload {

void ItemMapping::validate() const {
  auto check = [](const std::vector<int>& items, const char* name) {
    if (items.empty()) throw Error(ErrorCode::InvalidConfig, std::string("labels.mapping.") + name + ": empty");
    for (int i : items) {
      if (i < 0 || i >= static_cast<int>(kReportItems)) {
        throw Error(ErrorCode::InvalidConfig, std::string("labels.mapping.") + name + ": item index out of range");
      }
    }
  };
  check(intrinsic, "intrinsic");
  check(extraneous, "extraneous");
  check(germane, "germane");
  check(overall, "overall");
}

void LevelEdges::validate() const {
  if (!(low_moderate > 1.0 && low_moderate < moderate_high && moderate_high < 10.0)) {
    throw Error(ErrorCode::InvalidEdges, "edges must satisfy 1 < e1 < e2 < 10");
  }
}

namespace {

double mean_of(const ReportEvent& r, const std::vector<int>& idx) {
  double sum = 0.0;
  for (int i : idx) sum += r.items[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(idx.size());
}

}  // namespace

CognitiveLoadScore score_questionnaire(const ReportEvent& report, const ItemMapping& mapping) {
  mapping.validate();
  CognitiveLoadScore s;
  s.intrinsic_mean = mean_of(report, mapping.intrinsic);
  s.extraneous_mean = mean_of(report, mapping.extraneous);
  s.germane_mean = mean_of(report, mapping.germane);
  s.overall_item = mean_of(report, mapping.overall);
  s.final_score = (s.intrinsic_mean + s.extraneous_mean + s.germane_mean + s.overall_item) / 4.0;
  return s;
}

Level discretize(const CognitiveLoadScore& score, const LevelEdges& edges) {
  edges.validate();
  if (score.final_score < edges.low_moderate) return Level::low;
  if (score.final_score < edges.moderate_high) return Level::moderate;
  return Level::high;
}

LevelEdges tertile_edges(std::span<const double> final_scores) {
  if (final_scores.empty()) throw Error(ErrorCode::Empty, "no scores for tertile edges");
  std::vector<double> v(final_scores.begin(), final_scores.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  LevelEdges e{quantile(1.0 / 3.0), quantile(2.0 / 3.0)};
  e.validate();
  return e;
}

LevelCounts level_distribution(std::span<const Level> levels) {
  LevelCounts c;
  for (Level l : levels) ++c.counts[static_cast<std::size_t>(l)];
  return c;
}

}  // namespace cogload
