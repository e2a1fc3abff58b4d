#pragma once

#include <array>
#include <span>
#include <vector>

#include "cogload/sensor.hpp"

namespace cogload {

struct CognitiveLoadScore {
  double intrinsic_mean = 0.0;
  double extraneous_mean = 0.0;
  double germane_mean = 0.0;
  double overall_item = 0.0;
  double final_score = 0.0;  // mean of the four components above
};

// Which questionnaire item positions feed each sub-scale.
struct ItemMapping {
  std::vector<int> intrinsic{0, 1, 2};
  std::vector<int> extraneous{3, 4};
  std::vector<int> germane{5, 6};
  std::vector<int> overall{7};

  void validate() const;
};

// Level boundaries on the 1..10 final score; bins are left-closed.
struct LevelEdges {
  double low_moderate = 4.0;
  double moderate_high = 7.0;

  void validate() const;
};

CognitiveLoadScore score_questionnaire(const ReportEvent& report, const ItemMapping& mapping = {});

// low if final < e1, moderate if e1 <= final < e2, high otherwise.
// Throws InvalidEdges unless 1 < e1 < e2 < 10.
Level discretize(const CognitiveLoadScore& score, const LevelEdges& edges = {});

// Edges at the 1/3 and 2/3 quantiles of the given final scores.
LevelEdges tertile_edges(std::span<const double> final_scores);

struct LevelCounts {
  std::array<std::size_t, 3> counts{};

  std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
};

LevelCounts level_distribution(std::span<const Level> levels);

}  // namespace cogload
