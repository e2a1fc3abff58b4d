#include "cogload/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <utility>

#include "cogload/csv.hpp"
#include "cogload/error.hpp"
#include "cogload/parallel.hpp"

namespace cogload {

namespace {

struct DoubleField {
  const char* name;
  double GeneratorParams::*member;
  bool allow_negative;
};

constexpr DoubleField kDoubleFields[] = {
    {"session_minutes", &GeneratorParams::session_minutes, false},
    {"report_period_s", &GeneratorParams::report_period_s, false},
    {"report_jitter_s", &GeneratorParams::report_jitter_s, false},
    {"report_min_s", &GeneratorParams::report_min_s, false},
    {"report_max_s", &GeneratorParams::report_max_s, false},
    {"effect_horizon_s", &GeneratorParams::effect_horizon_s, false},
    {"dropout_rate", &GeneratorParams::dropout_rate, false},
    {"pupil_dilation_mm_per_level", &GeneratorParams::pupil_dilation_mm_per_level, true},
    {"pupil_reversal_rate_gain", &GeneratorParams::pupil_reversal_rate_gain, true},
    {"hr_bpm_per_level", &GeneratorParams::hr_bpm_per_level, true},
    {"eda_scr_rate_gain", &GeneratorParams::eda_scr_rate_gain, true},
    {"pupil_baseline_mm", &GeneratorParams::pupil_baseline_mm, false},
    {"pupil_baseline_sd_mm", &GeneratorParams::pupil_baseline_sd_mm, false},
    {"pupil_noise_mm", &GeneratorParams::pupil_noise_mm, false},
    {"pupil_drift_mm", &GeneratorParams::pupil_drift_mm, false},
    {"pupil_drift_tau_s", &GeneratorParams::pupil_drift_tau_s, false},
    {"pupil_oscillation_mm", &GeneratorParams::pupil_oscillation_mm, false},
    {"pupil_oscillation_hz", &GeneratorParams::pupil_oscillation_hz, false},
    {"pupil_time_jitter_s", &GeneratorParams::pupil_time_jitter_s, false},
    {"eda_baseline_us", &GeneratorParams::eda_baseline_us, false},
    {"eda_baseline_sd_us", &GeneratorParams::eda_baseline_sd_us, false},
    {"eda_noise_us", &GeneratorParams::eda_noise_us, false},
    {"eda_drift_us", &GeneratorParams::eda_drift_us, false},
    {"eda_drift_tau_s", &GeneratorParams::eda_drift_tau_s, false},
    {"eda_scr_rate_hz", &GeneratorParams::eda_scr_rate_hz, false},
    {"eda_scr_amplitude_us", &GeneratorParams::eda_scr_amplitude_us, false},
    {"hr_baseline_bpm", &GeneratorParams::hr_baseline_bpm, false},
    {"hr_baseline_sd_bpm", &GeneratorParams::hr_baseline_sd_bpm, false},
    {"hr_noise_bpm", &GeneratorParams::hr_noise_bpm, false},
    {"hr_drift_bpm", &GeneratorParams::hr_drift_bpm, false},
    {"hr_drift_tau_s", &GeneratorParams::hr_drift_tau_s, false},
    {"blink_rate_hz", &GeneratorParams::blink_rate_hz, false},
    {"low_confidence_rate", &GeneratorParams::low_confidence_rate, false},
    {"item_noise_sd", &GeneratorParams::item_noise_sd, false},
};

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidParams, field + ": " + why);
}

double round_to(double v, double step) { return std::round(v / step) * step; }

double coded(Level l) { return static_cast<double>(static_cast<int>(l)) - 1.0; }

Level draw_level(const std::array<double, 3>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    acc += probs[c];
    if (u < acc) return static_cast<Level>(c);
  }
  return Level::high;
}

// Piecewise-constant coded level over the session, read in time order.
class LevelTrack {
 public:
  void add(double from, double x) { steps_.emplace_back(from, x); }

  double at(double t) {
    while (pos_ + 1 < steps_.size() && steps_[pos_ + 1].first <= t) ++pos_;
    return steps_[pos_].second;
  }

  void rewind() { pos_ = 0; }

 private:
  std::vector<std::pair<double, double>> steps_;
  std::size_t pos_ = 0;
};

class OrnsteinUhlenbeck {
 public:
  OrnsteinUhlenbeck(double sd, double tau, double dt, Rng& rng)
      : a_(std::exp(-dt / tau)), sd_(sd), x_(sd * rng.normal()) {}

  double step(Rng& rng) {
    x_ = a_ * x_ + sd_ * std::sqrt(1.0 - a_ * a_) * rng.normal();
    return x_;
  }

 private:
  double a_;
  double sd_;
  double x_;
};

}  // namespace

void GeneratorParams::validate() const {
  if (n_participants < 1) invalid("n_participants", "must be at least 1");
  for (const auto& f : kDoubleFields) {
    const double v = this->*f.member;
    if (!std::isfinite(v)) invalid(f.name, "must be finite");
    if (!f.allow_negative && v < 0.0) invalid(f.name, "must be non-negative");
  }
  if (!(session_minutes > 0.0)) invalid("session_minutes", "must be positive");
  if (!(report_period_s > 0.0)) invalid("report_period_s", "must be positive");
  if (report_min_s > report_max_s) invalid("report_min_s", "exceeds report_max_s");
  if (report_max_s + report_jitter_s * 2.0 >= report_period_s) {
    invalid("report_max_s", "reports would overlap at this period and jitter");
  }
  if (session_minutes * 60.0 < report_period_s) invalid("session_minutes", "shorter than one report period");
  if (dropout_rate > 1.0) invalid("dropout_rate", "must be at most 1");
  if (low_confidence_rate > 1.0) invalid("low_confidence_rate", "must be at most 1");
  if (!(pupil_drift_tau_s > 0.0)) invalid("pupil_drift_tau_s", "must be positive");
  if (!(eda_drift_tau_s > 0.0)) invalid("eda_drift_tau_s", "must be positive");
  if (!(hr_drift_tau_s > 0.0)) invalid("hr_drift_tau_s", "must be positive");
  if (pupil_time_jitter_s >= 0.5 / kPupilRateHz) invalid("pupil_time_jitter_s", "must be below half a sample period");
  for (std::size_t r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = transition[r][c];
      if (!std::isfinite(v) || v < 0.0) {
        invalid("transition", "row " + std::to_string(r) + " has a negative or non-finite entry");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      invalid("transition", "row " + std::to_string(r) + " sums to " + csv::format_double(sum) + ", not 1");
    }
  }
}

GeneratorParams GeneratorParams::null_effect() {
  GeneratorParams p;
  p.pupil_dilation_mm_per_level = 0.0;
  p.pupil_reversal_rate_gain = 0.0;
  p.hr_bpm_per_level = 0.0;
  p.eda_scr_rate_gain = 0.0;
  return p;
}

GeneratorParams GeneratorParams::hr_only() {
  GeneratorParams p = null_effect();
  p.hr_bpm_per_level = 10.0;
  return p;
}

GeneratorParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) invalid("params", "expected a JSON object");
  GeneratorParams p;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) invalid("preset", "expected a string");
    const auto preset = j["preset"].get<std::string>();
    if (preset == "null") {
      p = GeneratorParams::null_effect();
    } else if (preset == "hr_only") {
      p = GeneratorParams::hr_only();
    } else if (preset != "default") {
      invalid("preset", "unknown preset '" + preset + "'");
    }
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") continue;
    if (key == "n_participants") {
      if (!value.is_number_integer()) invalid(key, "expected an integer");
      p.n_participants = value.get<int>();
      continue;
    }
    if (key == "seed") {
      if (!value.is_number_unsigned()) invalid(key, "expected a non-negative integer");
      p.seed = value.get<std::uint64_t>();
      continue;
    }
    if (key == "transition") {
      if (!value.is_array() || value.size() != 3) invalid(key, "expected a 3x3 array");
      for (std::size_t r = 0; r < 3; ++r) {
        if (!value[r].is_array() || value[r].size() != 3) invalid(key, "expected a 3x3 array");
        for (std::size_t c = 0; c < 3; ++c) {
          if (!value[r][c].is_number()) invalid(key, "entries must be numbers");
          p.transition[r][c] = value[r][c].get<double>();
        }
      }
      continue;
    }
    const auto* field = std::find_if(std::begin(kDoubleFields), std::end(kDoubleFields),
                                     [&](const DoubleField& f) { return key == f.name; });
    if (field == std::end(kDoubleFields)) invalid(key, "unknown key");
    if (!value.is_number()) invalid(key, "expected a number");
    p.*(field->member) = value.get<double>();
  }
  p.validate();
  return p;
}

nlohmann::ordered_json to_json(const GeneratorParams& p) {
  nlohmann::ordered_json j;
  j["n_participants"] = p.n_participants;
  for (const auto& f : kDoubleFields) j[f.name] = p.*f.member;
  j["transition"] = p.transition;
  j["seed"] = p.seed;
  return j;
}

std::array<double, 3> stationary_distribution(const TransitionMatrix& t) {
  std::array<double, 3> pi{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  for (int it = 0; it < 10000; ++it) {
    std::array<double, 3> next{};
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) next[c] += pi[r] * t[r][c];
    }
    double diff = 0.0;
    for (std::size_t c = 0; c < 3; ++c) diff += std::abs(next[c] - pi[c]);
    pi = next;
    if (diff < 1e-15) break;
  }
  return pi;
}

std::vector<Level> latent_path(const TransitionMatrix& t, std::size_t n, Rng& rng) {
  std::vector<Level> path;
  path.reserve(n);
  if (n == 0) return path;
  path.push_back(draw_level(stationary_distribution(t), rng));
  while (path.size() < n) path.push_back(draw_level(t[static_cast<std::size_t>(path.back())], rng));
  return path;
}

std::string participant_id(const GeneratorParams& p, int index) {
  const int width = std::max<int>(2, static_cast<int>(std::to_string(p.n_participants).size()));
  std::string digits = std::to_string(index + 1);
  return "P" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))), '0') +
         digits;
}

SyntheticSession generate_session(const GeneratorParams& p, int participant_index) {
  p.validate();
  if (participant_index < 0 || participant_index >= p.n_participants) {
    invalid("participant_index", "out of range");
  }
  const auto idx = static_cast<std::uint64_t>(participant_index);
  Rng schedule_rng(derive_seed(p.seed, idx, 0));
  Rng latent_rng(derive_seed(p.seed, idx, 1));
  Rng pupil_rng(derive_seed(p.seed, idx, 2));
  Rng eda_rng(derive_seed(p.seed, idx, 3));
  Rng hr_rng(derive_seed(p.seed, idx, 4));
  Rng item_rng(derive_seed(p.seed, idx, 5));
  Rng person_rng(derive_seed(p.seed, idx, 6));

  SyntheticSession out;
  Session& s = out.session;
  s.participant_id = participant_id(p, participant_index);
  s.epoch = 1.7e9 + 86400.0 * static_cast<double>(participant_index);

  const auto n_reports = static_cast<std::size_t>(std::floor(p.session_minutes * 60.0 / p.report_period_s + 1e-9));
  std::vector<bool> dropped(n_reports);
  double prev_end = 0.0;
  for (std::size_t k = 0; k < n_reports; ++k) {
    ReportEvent r;
    double start = p.report_period_s * static_cast<double>(k + 1) + schedule_rng.uniform(-1.0, 1.0) * p.report_jitter_s;
    start = std::max(start, prev_end + 1.0);
    r.start = round_to(start, 1e-3);
    r.end = round_to(r.start + schedule_rng.uniform(p.report_min_s, p.report_max_s), 1e-3);
    dropped[k] = schedule_rng.uniform() < p.dropout_rate;
    s.reports.push_back(r);
    prev_end = r.end;
  }
  const double duration = s.reports.back().end + 5.0;

  out.truth.levels = latent_path(p.transition, n_reports, latent_rng);
  const auto pi = stationary_distribution(p.transition);
  LevelTrack track;
  prev_end = 0.0;
  for (std::size_t k = 0; k < n_reports; ++k) {
    const Level filler = draw_level(pi, latent_rng);
    const double effect_from = std::max(prev_end, s.reports[k].start - p.effect_horizon_s);
    track.add(prev_end, coded(filler));
    track.add(effect_from, coded(out.truth.levels[k]));
    prev_end = s.reports[k].end;
  }

  static constexpr std::array<double, 3> kItemTargets{2.5, 5.5, 8.5};
  for (std::size_t k = 0; k < n_reports; ++k) {
    const double target = kItemTargets[static_cast<std::size_t>(out.truth.levels[k])];
    for (auto& item : s.reports[k].items) {
      item = static_cast<int>(std::clamp(std::round(item_rng.normal(target, p.item_noise_sd)), 1.0, 10.0));
    }
  }

  // Pupil diameter with blinks and confidence dips.
  {
    const double dt = 1.0 / kPupilRateHz;
    const auto n = static_cast<std::size_t>(std::floor(duration * kPupilRateHz)) + 1;
    const double base = std::max(1.0, p.pupil_baseline_mm + p.pupil_baseline_sd_mm * person_rng.normal());
    OrnsteinUhlenbeck drift(p.pupil_drift_mm, p.pupil_drift_tau_s, dt, pupil_rng);
    double phase = pupil_rng.uniform(0.0, 2.0 * std::numbers::pi);
    double next_blink = p.blink_rate_hz > 0.0 ? pupil_rng.exponential(p.blink_rate_hz) : duration + 1.0;
    BlinkEvent blink{-1.0, -1.0};
    track.rewind();
    s.pupil.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t_nominal = static_cast<double>(i) * dt;
      const double jitter = std::clamp(pupil_rng.normal() * p.pupil_time_jitter_s, -0.4 * dt, 0.4 * dt);
      const double t = std::max(0.0, round_to(t_nominal + jitter, 1e-4));
      const double x = track.at(t_nominal);
      const double freq = std::max(0.0, p.pupil_oscillation_hz * (1.0 + p.pupil_reversal_rate_gain * x));
      phase = std::fmod(phase + 2.0 * std::numbers::pi * freq * dt, 2.0 * std::numbers::pi);
      double value = base + p.pupil_dilation_mm_per_level * x + drift.step(pupil_rng) +
                     p.pupil_oscillation_mm * std::sin(phase) + p.pupil_noise_mm * pupil_rng.normal();
      double confidence = pupil_rng.uniform(0.85, 1.0);
      if (pupil_rng.uniform() < p.low_confidence_rate) confidence = pupil_rng.uniform(0.0, 0.6);
      if (t_nominal >= next_blink) {
        blink.onset = round_to(t_nominal, 1e-4);
        blink.offset = round_to(t_nominal + pupil_rng.uniform(0.1, 0.3), 1e-4);
        s.blinks.push_back(blink);
        next_blink = blink.offset + pupil_rng.exponential(p.blink_rate_hz);
      }
      if (t_nominal >= blink.onset && t_nominal <= blink.offset) {
        value *= pupil_rng.uniform(0.2, 0.6);
        confidence = pupil_rng.uniform(0.0, 0.3);
      }
      s.pupil.samples.push_back({t, round_to(std::max(value, 0.0), 1e-4), round_to(confidence, 1e-3), true});
    }
  }

  // Electrodermal activity: tonic level plus skin-conductance responses.
  {
    const double dt = 1.0 / kEdaRateHz;
    const auto n = static_cast<std::size_t>(std::floor(duration * kEdaRateHz)) + 1;
    const double base = std::max(0.5, p.eda_baseline_us + p.eda_baseline_sd_us * person_rng.normal());
    OrnsteinUhlenbeck drift(p.eda_drift_us, p.eda_drift_tau_s, dt, eda_rng);
    constexpr double kRise = 0.75, kDecay = 3.0;
    const double peak_time = std::log(kDecay / kRise) * kDecay * kRise / (kDecay - kRise);
    const double norm = 1.0 / (std::exp(-peak_time / kDecay) - std::exp(-peak_time / kRise));
    const double decay_step = std::exp(-dt / kDecay), rise_step = std::exp(-dt / kRise);
    double slow = 0.0, fast = 0.0;
    track.rewind();
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * dt;
      const double rate = p.eda_scr_rate_hz * std::max(0.0, 1.0 + p.eda_scr_rate_gain * track.at(t));
      slow *= decay_step;
      fast *= rise_step;
      if (eda_rng.uniform() < rate * dt) {
        const double amp = p.eda_scr_amplitude_us * eda_rng.uniform(0.5, 1.5) * norm;
        slow += amp;
        fast += amp;
      }
      const double value = base + drift.step(eda_rng) + (slow - fast) + p.eda_noise_us * eda_rng.normal();
      s.eda.samples.push_back({t, round_to(std::max(value, 0.01), 1e-4), 1.0, true});
    }
  }

  // Heart rate, one value per 10 s span.
  {
    const double dt = 1.0 / kHrRateHz;
    const auto n = static_cast<std::size_t>(std::floor(duration * kHrRateHz)) + 1;
    const double base = p.hr_baseline_bpm + p.hr_baseline_sd_bpm * person_rng.normal();
    OrnsteinUhlenbeck drift(p.hr_drift_bpm, p.hr_drift_tau_s, dt, hr_rng);
    track.rewind();
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * dt;
      const double value = base + p.hr_bpm_per_level * track.at(t + 0.5 * dt) + drift.step(hr_rng) +
                           p.hr_noise_bpm * hr_rng.normal();
      s.hr.samples.push_back({t, round_to(std::max(value, 30.0), 1e-2), 1.0, true});
    }
  }

  // Wristband dropouts remove EDA and HR for a whole pre-report interval.
  prev_end = 0.0;
  for (std::size_t k = 0; k < n_reports; ++k) {
    if (dropped[k]) {
      const double from = prev_end, to = s.reports[k].start;
      auto inside = [&](const Sample& x) { return x.t >= from && x.t < to; };
      std::erase_if(s.eda.samples, inside);
      std::erase_if(s.hr.samples, inside);
    }
    prev_end = s.reports[k].end;
  }
  return out;
}

std::vector<SyntheticSession> generate_cohort(const GeneratorParams& p, unsigned jobs) {
  p.validate();
  std::vector<SyntheticSession> out(static_cast<std::size_t>(p.n_participants));
  parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = generate_session(p, static_cast<int>(i)); });
  return out;
}

void save_truth(const GroundTruth& truth, const std::filesystem::path& path, std::string_view comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, path.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "report_index,latent_level\n";
  for (std::size_t k = 0; k < truth.levels.size(); ++k) out << k << ',' << to_string(truth.levels[k]) << '\n';
}

GroundTruth load_truth(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto li = table.column("latent_level");
  if (!table.column("report_index") || !li) throw Error(ErrorCode::MalformedRow, path.string() + ": bad header");
  GroundTruth truth;
  for (const auto& row : table.rows) {
    const auto level = parse_level(row.fields.at(*li));
    if (!level) throw Error(ErrorCode::MalformedRow, path.string() + ":" + std::to_string(row.line));
    truth.levels.push_back(*level);
  }
  return truth;
}

}  // namespace cogload
