#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogload/random.hpp"
#include "cogload/sensor.hpp"

namespace cogload {

using TransitionMatrix = std::array<std::array<double, 3>, 3>;

// Defaults describe the strong-effect cohort. Effects are per level step,
// with levels coded -1, 0, +1.
struct GeneratorParams {
  int n_participants = 34;
  double session_minutes = 60.0;
  double report_period_s = 300.0;
  double report_jitter_s = 20.0;
  double report_min_s = 20.0;
  double report_max_s = 60.0;
  // Only the last effect_horizon_s before a report reflect its level; the
  // rest of the interval follows an unrelated level.
  double effect_horizon_s = 300.0;
  // Chance that the wristband streams are lost for a whole report interval.
  double dropout_rate = 0.235;

  double pupil_dilation_mm_per_level = 0.05;
  double pupil_reversal_rate_gain = 0.05;
  double hr_bpm_per_level = 6.0;
  double eda_scr_rate_gain = 0.8;

  double pupil_baseline_mm = 3.5;
  double pupil_baseline_sd_mm = 0.4;
  double pupil_noise_mm = 0.02;
  double pupil_drift_mm = 0.08;
  double pupil_drift_tau_s = 15.0;
  double pupil_oscillation_mm = 0.04;
  double pupil_oscillation_hz = 0.8;
  double pupil_time_jitter_s = 0.0005;

  double eda_baseline_us = 3.0;
  double eda_baseline_sd_us = 1.0;
  double eda_noise_us = 0.01;
  double eda_drift_us = 0.2;
  double eda_drift_tau_s = 60.0;
  double eda_scr_rate_hz = 0.06;
  double eda_scr_amplitude_us = 0.15;

  double hr_baseline_bpm = 75.0;
  double hr_baseline_sd_bpm = 5.0;
  double hr_noise_bpm = 1.5;
  double hr_drift_bpm = 2.0;
  double hr_drift_tau_s = 60.0;

  double blink_rate_hz = 0.25;
  double low_confidence_rate = 0.02;
  double item_noise_sd = 1.2;

  TransitionMatrix transition{{{0.6, 0.3, 0.1}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}}};
  std::uint64_t seed = 1;

  // Throws InvalidParams naming the offending field.
  void validate() const;

  static GeneratorParams null_effect();
  static GeneratorParams hr_only();
};

// Unknown keys and wrong types throw InvalidParams naming the key. A
// "preset" key (default, null, hr_only) selects the starting values.
GeneratorParams params_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const GeneratorParams& p);

std::array<double, 3> stationary_distribution(const TransitionMatrix& t);

// A Markov chain of n levels started from the stationary distribution.
std::vector<Level> latent_path(const TransitionMatrix& t, std::size_t n, Rng& rng);

struct GroundTruth {
  std::vector<Level> levels;  // one per report
};

struct SyntheticSession {
  Session session;
  GroundTruth truth;
};

std::string participant_id(const GeneratorParams& p, int index);

SyntheticSession generate_session(const GeneratorParams& p, int participant_index);
std::vector<SyntheticSession> generate_cohort(const GeneratorParams& p, unsigned jobs = 1);

// truth.csv: report_index,latent_level
void save_truth(const GroundTruth& truth, const std::filesystem::path& path, std::string_view comment = {});
GroundTruth load_truth(const std::filesystem::path& path);

}  // namespace cogload
