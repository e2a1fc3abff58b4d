#include "cogload/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cogload/error.hpp"

namespace cogload {

void CleaningConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::InvalidConfig, "cleaning." + field + ": " + why);
  };
  if (!(blink_guard_s >= 0.0)) fail("blink_guard_s", "must be >= 0");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) fail("min_confidence", "must lie in [0,1]");
  if (butter_order < 1) fail("butter_order", "must be >= 1");
  if (!(pupil_rate_hz > 0.0)) fail("pupil_rate_hz", "must be positive");
  if (!(butter_cutoff_hz > 0.0 && butter_cutoff_hz < pupil_rate_hz / 2.0)) {
    fail("butter_cutoff_hz", "must lie in (0, pupil_rate_hz / 2)");
  }
  if (sma_k_eda < 1 || sma_k_eda % 2 == 0) fail("sma_k_eda", "must be odd and >= 1");
  if (sma_k_hr < 1 || sma_k_hr % 2 == 0) fail("sma_k_hr", "must be odd and >= 1");
}

SensorSeries remove_blink_intervals(const SensorSeries& pupil, std::span<const BlinkEvent> blinks, double guard_s) {
  if (!(guard_s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "guard_s must be >= 0");
  std::vector<std::pair<double, double>> spans;
  spans.reserve(blinks.size());
  for (const auto& b : blinks) spans.emplace_back(b.onset - guard_s, b.offset + guard_s);
  std::sort(spans.begin(), spans.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& s : spans) {
    if (!merged.empty() && s.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, s.second);
    } else {
      merged.push_back(s);
    }
  }
  SensorSeries out = pupil;
  std::size_t j = 0;
  for (auto& x : out.samples) {
    while (j < merged.size() && merged[j].second < x.t) ++j;
    if (j < merged.size() && merged[j].first <= x.t) x.valid = false;
  }
  return out;
}

SensorSeries filter_low_confidence(const SensorSeries& pupil, double min_conf) {
  if (!(min_conf >= 0.0 && min_conf <= 1.0)) throw Error(ErrorCode::InvalidArgument, "min_conf must lie in [0,1]");
  SensorSeries out = pupil;
  for (auto& x : out.samples) {
    if (x.confidence < min_conf) x.valid = false;
  }
  return out;
}

SensorSeries interpolate_gaps(const SensorSeries& series) {
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.samples[i].valid) valid.push_back(i);
  }
  if (valid.size() < 2) {
    throw Error(ErrorCode::TooSparse, std::string(to_string(series.modality)) + ": " +
                                          std::to_string(valid.size()) + " valid samples");
  }
  SensorSeries out = series;
  auto& s = out.samples;
  for (std::size_t i = 0; i < valid.front(); ++i) s[i].value = s[valid.front()].value;
  for (std::size_t i = valid.back() + 1; i < s.size(); ++i) s[i].value = s[valid.back()].value;
  for (std::size_t v = 0; v + 1 < valid.size(); ++v) {
    const std::size_t lo = valid[v];
    const std::size_t hi = valid[v + 1];
    if (hi == lo + 1) continue;
    const double t0 = s[lo].t;
    const double dt = s[hi].t - t0;
    const double x0 = s[lo].value;
    const double dx = s[hi].value - x0;
    for (std::size_t i = lo + 1; i < hi; ++i) s[i].value = x0 + dx * ((s[i].t - t0) / dt);
  }
  for (auto& x : s) x.valid = true;
  return out;
}

SensorSeries resample_uniform(const SensorSeries& series, double rate_hz) {
  if (!(rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "rate_hz must be positive");
  std::vector<Sample> pts;
  pts.reserve(series.size());
  for (const auto& x : series.samples) {
    if (x.valid) pts.push_back(x);
  }
  if (pts.size() < 2) {
    throw Error(ErrorCode::TooSparse, std::string(to_string(series.modality)) + ": cannot resample");
  }
  const double t0 = pts.front().t;
  const double span = pts.back().t - t0;
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span * rate_hz - 1e-9)));
  SensorSeries out{series.modality, rate_hz, {}};
  out.samples.resize(count);
  std::size_t j = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) / rate_hz;
    while (j + 2 < pts.size() && pts[j + 1].t <= t) ++j;
    const auto& a = pts[j];
    const auto& b = pts[j + 1];
    const double w = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    out.samples[k] = Sample{t, a.value + w * (b.value - a.value), 1.0, true};
  }
  return out;
}

namespace {

using cplx = std::complex<double>;

std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> p{1.0};
  for (const auto& r : roots) {
    std::vector<cplx> next(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i] += p[i];
      next[i + 1] -= r * p[i];
    }
    p = std::move(next);
  }
  return p;
}

}  // namespace

FilterCoefficients design_butterworth(int order, double cutoff_hz, double rate_hz) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  if (!(rate_hz > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < rate_hz / 2.0)) {
    throw Error(ErrorCode::InvalidCutoff, "cutoff must lie in (0, rate/2)");
  }
  const double fs2 = 2.0 * rate_hz;
  const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / rate_hz);
  std::vector<cplx> poles;
  std::vector<cplx> zeros;
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const cplx analog = warped * std::polar(1.0, theta);
    poles.push_back((fs2 + analog) / (fs2 - analog));
    zeros.emplace_back(-1.0, 0.0);
  }
  const auto bz = poly_from_roots(zeros);
  const auto az = poly_from_roots(poles);
  FilterCoefficients c;
  for (const auto& v : bz) c.b.push_back(v.real());
  for (const auto& v : az) c.a.push_back(v.real());
  double sum_b = 0.0;
  double sum_a = 0.0;
  for (double v : c.b) sum_b += v;
  for (double v : c.a) sum_a += v;
  const double gain = sum_a / sum_b;
  for (double& v : c.b) v *= gain;
  return c;
}

std::complex<double> frequency_response(const FilterCoefficients& c, double f_hz, double rate_hz) {
  const double w = 2.0 * std::numbers::pi * f_hz / rate_hz;
  cplx num = 0.0;
  cplx den = 0.0;
  for (std::size_t k = 0; k < c.b.size(); ++k) num += c.b[k] * std::polar(1.0, -w * static_cast<double>(k));
  for (std::size_t k = 0; k < c.a.size(); ++k) den += c.a[k] * std::polar(1.0, -w * static_cast<double>(k));
  return num / den;
}

std::vector<double> steady_state_zi(const FilterCoefficients& c) {
  const std::size_t n = std::max(c.a.size(), c.b.size()) - 1;
  std::vector<double> a(n + 1, 0.0);
  std::vector<double> b(n + 1, 0.0);
  std::copy(c.a.begin(), c.a.end(), a.begin());
  std::copy(c.b.begin(), c.b.end(), b.begin());
  for (double& v : b) v /= a[0];
  for (std::size_t i = n + 1; i-- > 0;) a[i] /= a[0];
  if (n == 0) return {};
  // (I - A^T) zi = b[1:] - a[1:] * b[0], with A the companion matrix of a.
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 1.0;
    m[i][0] += a[i + 1];
    if (i + 1 < n) m[i][i + 1] -= 1.0;
    m[i][n] = b[i + 1] - a[i + 1] * b[0];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    std::swap(m[col], m[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k <= n; ++k) m[r][k] -= f * m[col][k];
    }
  }
  std::vector<double> zi(n);
  for (std::size_t i = 0; i < n; ++i) zi[i] = m[i][n] / m[i][i];
  return zi;
}

std::vector<double> lfilter(const FilterCoefficients& c, std::span<const double> x, std::vector<double> z) {
  const std::size_t n = std::max(c.a.size(), c.b.size()) - 1;
  std::vector<double> a(n + 1, 0.0);
  std::vector<double> b(n + 1, 0.0);
  std::copy(c.a.begin(), c.a.end(), a.begin());
  std::copy(c.b.begin(), c.b.end(), b.begin());
  const double a0 = a[0];
  for (double& v : a) v /= a0;
  for (double& v : b) v /= a0;
  z.resize(n, 0.0);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double yi = b[0] * xi + (n > 0 ? z[0] : 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) z[k] = b[k + 1] * xi + z[k + 1] - a[k + 1] * yi;
    if (n > 0) z[n - 1] = b[n] * xi - a[n] * yi;
    y[i] = yi;
  }
  return y;
}

std::vector<double> filtfilt(const FilterCoefficients& c, std::span<const double> x) {
  const std::size_t padlen = 3 * std::max(c.a.size(), c.b.size());
  if (x.size() < padlen) {
    throw Error(ErrorCode::TooShort, std::to_string(x.size()) + " samples, need " + std::to_string(padlen));
  }
  const std::size_t pad = std::min(padlen, x.size() - 1);
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto zi = steady_state_zi(c);
  auto scaled = [&](double v) {
    std::vector<double> z = zi;
    for (double& e : z) e *= v;
    return z;
  };
  auto y = lfilter(c, ext, scaled(ext.front()));
  std::reverse(y.begin(), y.end());
  y = lfilter(c, y, scaled(y.front()));
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

SensorSeries lowpass_zero_phase(const SensorSeries& series, const FilterCoefficients& c) {
  std::vector<double> x(series.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = series.samples[i].value;
  const auto y = filtfilt(c, x);
  SensorSeries out = series;
  for (std::size_t i = 0; i < y.size(); ++i) out.samples[i].value = y[i];
  return out;
}

SensorSeries moving_average(const SensorSeries& series, int k) {
  if (k < 1 || k % 2 == 0) throw Error(ErrorCode::InvalidK, "k must be odd and >= 1, got " + std::to_string(k));
  const std::size_t half = static_cast<std::size_t>(k / 2);
  const std::size_t n = series.size();
  SensorSeries out = series;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += series.samples[j].value;
    out.samples[i].value = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

SensorSeries clean_pupil(const SensorSeries& pupil, std::span<const BlinkEvent> blinks, const CleaningConfig& cfg) {
  auto s = remove_blink_intervals(pupil, blinks, cfg.blink_guard_s);
  s = filter_low_confidence(s, cfg.min_confidence);
  s = interpolate_gaps(s);
  s = resample_uniform(s, cfg.pupil_rate_hz);
  return lowpass_zero_phase(s, design_butterworth(cfg.butter_order, cfg.butter_cutoff_hz, cfg.pupil_rate_hz));
}

SensorSeries clean_eda(const SensorSeries& eda, const CleaningConfig& cfg) { return moving_average(eda, cfg.sma_k_eda); }

SensorSeries clean_hr(const SensorSeries& hr, const CleaningConfig& cfg) { return moving_average(hr, cfg.sma_k_hr); }

Session clean_session(const Session& session, const CleaningConfig& cfg) {
  Session out;
  out.participant_id = session.participant_id;
  out.epoch = session.epoch;
  out.blinks = session.blinks;
  out.reports = session.reports;
  out.pupil = clean_pupil(session.pupil, session.blinks, cfg);
  out.eda = clean_eda(session.eda, cfg);
  out.hr = clean_hr(session.hr, cfg);
  return out;
}

}  // namespace cogload
