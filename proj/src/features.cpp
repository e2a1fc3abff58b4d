#include "cogload/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogload/error.hpp"

namespace cogload {

double FeatureVector::at(std::string_view name) const {
  for (const auto& f : features) {
    if (f.name == name) return f.value;
  }
  throw Error(ErrorCode::SchemaMismatch, "no feature named " + std::string(name));
}

std::vector<std::string> FeatureVector::names() const {
  std::vector<std::string> out;
  for (const auto& f : features) out.push_back(f.name);
  return out;
}

std::vector<double> FeatureVector::values() const {
  std::vector<double> out;
  for (const auto& f : features) out.push_back(f.value);
  return out;
}

std::string_view to_string(Schema s) { return s == Schema::unimodal ? "unimodal" : "multimodal"; }

std::optional<Schema> parse_schema(std::string_view text) {
  if (text == "unimodal") return Schema::unimodal;
  if (text == "multimodal") return Schema::multimodal;
  return std::nullopt;
}

namespace {

struct Names {
  std::vector<const char*> stat;
  std::vector<const char*> dynamic;
};

const Names& names_for(Modality m) {
  static const Names pupil{{"AvgPD", "MaxPD", "MinPD"}, {"AvgPV", "MaxPV", "MaxPC", "PCF"}};
  static const Names eda{{"AvgE", "SDGE", "MaxE", "MinE", "RngE"}, {"AvgEV", "MaxEV", "MaxEC", "ECF"}};
  static const Names hr{{"AvgH", "SDH", "MaxH", "MinH", "RngH"}, {"AvgHV", "MaxHV", "MaxHC", "HCF"}};
  switch (m) {
    case Modality::pupil: return pupil;
    case Modality::eda: return eda;
    case Modality::hr: return hr;
  }
  return pupil;
}

int sign(double d) { return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0); }

std::string label(const SensorSeries& s) { return std::string(to_string(s.modality)); }

}  // namespace

std::vector<Run> decompose_runs(std::span<const double> x) {
  std::vector<Run> runs;
  if (x.size() < 2) return runs;
  std::size_t start = 0;
  int dir = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const int sg = sign(x[i + 1] - x[i]);
    if (sg == 0 || sg == dir) continue;
    if (dir != 0) {
      runs.push_back({start, i, dir});
      start = i;
    }
    dir = sg;
  }
  if (dir != 0) runs.push_back({start, x.size() - 1, dir});
  return runs;
}

std::vector<Feature> stat_features(const SensorSeries& series) {
  if (series.size() < 2) throw Error(ErrorCode::TooFewSamples, label(series) + ": stat features need 2 samples");
  // Welford accumulation
  double mean = 0.0;
  double m2 = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (const auto& s : series.samples) {
    ++n;
    const double delta = s.value - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (s.value - mean);
    lo = std::min(lo, s.value);
    hi = std::max(hi, s.value);
  }
  const double sd = std::sqrt(std::max(0.0, m2 / static_cast<double>(n - 1)));
  const auto& nm = names_for(series.modality).stat;
  const Modality g = series.modality;
  if (g == Modality::pupil) {
    return {{nm[0], g, mean}, {nm[1], g, hi}, {nm[2], g, lo}};
  }
  return {{nm[0], g, mean}, {nm[1], g, sd}, {nm[2], g, hi}, {nm[3], g, lo}, {nm[4], g, hi - lo}};
}

std::vector<Feature> dynamic_features(const SensorSeries& series) {
  const auto& s = series.samples;
  if (s.size() < 3) throw Error(ErrorCode::TooFewSamples, label(series) + ": dynamic features need 3 samples");
  double speed_sum = 0.0;
  double speed_max = 0.0;
  int last_dir = 0;
  std::size_t reversals = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double dt = s[i + 1].t - s[i].t;
    if (!(dt > 0.0)) throw Error(ErrorCode::NonMonotonicTime, label(series) + ": timestamps must increase");
    const double dx = s[i + 1].value - s[i].value;
    const double speed = std::abs(dx / dt);
    speed_sum += speed;
    speed_max = std::max(speed_max, speed);
    const int sg = sign(dx);
    if (sg != 0) {
      if (last_dir != 0 && sg != last_dir) ++reversals;
      last_dir = sg;
    }
  }
  std::vector<double> values(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) values[i] = s[i].value;
  double max_change = 0.0;
  for (const auto& r : decompose_runs(values)) {
    max_change = std::max(max_change, std::abs(values[r.end] - values[r.start]));
  }
  const double duration = s.back().t - s.front().t;
  const auto& nm = names_for(series.modality).dynamic;
  const Modality g = series.modality;
  return {{nm[0], g, speed_sum / static_cast<double>(s.size() - 1)},
          {nm[1], g, speed_max},
          {nm[2], g, max_change},
          {nm[3], g, static_cast<double>(reversals) / duration}};
}

namespace {

constexpr std::size_t kMinIpaSamples = 32;

// Number of significant Haar detail maxima in a uniformly sampled run.
std::size_t ipa_events(std::span<const Sample> run) {
  const std::size_t m = run.size() / 2;
  std::vector<double> mag(m);
  for (std::size_t k = 0; k < m; ++k) {
    mag[k] = std::abs(run[2 * k].value - run[2 * k + 1].value) / std::sqrt(2.0);
  }
  std::vector<double> sorted = mag;
  const std::size_t mid = m / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  double median = sorted[mid];
  if (m % 2 == 0) {
    const double below = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + below);
  }
  const double sigma = median / 0.6745;
  const double threshold = sigma * std::sqrt(2.0 * std::log(static_cast<double>(m)));
  std::size_t count = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const bool left_ok = k == 0 || mag[k] > mag[k - 1];
    const bool right_ok = k + 1 == m || mag[k] > mag[k + 1];
    if (left_ok && right_ok && mag[k] > threshold) ++count;
  }
  return count;
}

double mean_step(std::span<const Sample> s) { return (s.back().t - s.front().t) / static_cast<double>(s.size() - 1); }

}  // namespace

double ipa(const SensorSeries& pupil) {
  const auto& s = pupil.samples;
  if (s.size() < kMinIpaSamples) {
    throw Error(ErrorCode::TooFewSamples, "ipa needs " + std::to_string(kMinIpaSamples) + " samples");
  }
  const double step = mean_step(s);
  if (!(step > 0.0)) throw Error(ErrorCode::NonUniformSampling, "zero-length pupil window");
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double dt = s[i + 1].t - s[i].t;
    if (std::abs(dt - step) > 0.01 * step) {
      throw Error(ErrorCode::NonUniformSampling, "pupil samples are not uniformly spaced");
    }
  }
  return static_cast<double>(ipa_events(s)) / (s.back().t - s.front().t);
}

double ipa_across_gaps(const SensorSeries& pupil) {
  const auto& s = pupil.samples;
  if (s.size() < 2) throw Error(ErrorCode::TooFewSamples, "ipa needs " + std::to_string(kMinIpaSamples) + " samples");
  const double period = pupil.nominal_rate > 0.0 ? 1.0 / pupil.nominal_rate : mean_step(s);
  std::size_t events = 0;
  double duration = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    const bool boundary = i == s.size() || std::abs((s[i].t - s[i - 1].t) - period) > 0.01 * period;
    if (!boundary) continue;
    const std::span<const Sample> run(s.data() + start, i - start);
    if (run.size() >= kMinIpaSamples) {
      events += ipa_events(run);
      duration += run.back().t - run.front().t;
    }
    start = i;
  }
  if (duration <= 0.0) {
    throw Error(ErrorCode::TooFewSamples, "no uniformly sampled pupil run of " + std::to_string(kMinIpaSamples));
  }
  return static_cast<double>(events) / duration;
}

std::vector<std::string> feature_names(Schema schema, bool include_ipa) {
  std::vector<std::string> out;
  auto add = [&](Modality m) {
    for (const char* n : names_for(m).stat) out.emplace_back(n);
    for (const char* n : names_for(m).dynamic) out.emplace_back(n);
  };
  add(Modality::pupil);
  if (include_ipa) out.emplace_back("IPA");
  if (schema == Schema::multimodal) {
    add(Modality::eda);
    add(Modality::hr);
  }
  return out;
}

std::vector<Modality> feature_groups(Schema schema, bool include_ipa) {
  std::vector<Modality> out(include_ipa ? 8 : 7, Modality::pupil);
  if (schema == Schema::multimodal) {
    out.insert(out.end(), 9, Modality::eda);
    out.insert(out.end(), 9, Modality::hr);
  }
  return out;
}

FeatureVector build_feature_vector(const Segment& seg, Schema schema, bool include_ipa) {
  FeatureVector fv;
  fv.segment_id = seg.id();
  auto append = [&](std::vector<Feature> part) {
    for (auto& f : part) fv.features.push_back(std::move(f));
  };
  append(stat_features(seg.pupil));
  append(dynamic_features(seg.pupil));
  if (include_ipa) fv.features.push_back({"IPA", Modality::pupil, ipa_across_gaps(seg.pupil)});
  if (schema == Schema::multimodal) {
    append(stat_features(seg.eda));
    append(dynamic_features(seg.eda));
    append(stat_features(seg.hr));
    append(dynamic_features(seg.hr));
  }
  for (const auto& f : fv.features) {
    if (!std::isfinite(f.value)) throw Error(ErrorCode::NonFiniteInput, "feature " + f.name + " is not finite");
  }
  return fv;
}

}  // namespace cogload
