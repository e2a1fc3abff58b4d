#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cogload/sensor.hpp"

namespace cogload {

// Digital IIR transfer function b(z)/a(z) with a[0] == 1.
struct FilterCoefficients {
  std::vector<double> b;
  std::vector<double> a;

  int order() const { return static_cast<int>(a.size()) - 1; }
};

struct CleaningConfig {
  double blink_guard_s = 0.25;
  double min_confidence = 0.65;
  int butter_order = 3;
  double butter_cutoff_hz = 4.0;
  double pupil_rate_hz = 200.0;
  int sma_k_eda = 5;
  int sma_k_hr = 3;

  // Throws Error(InvalidConfig) naming the offending field.
  void validate() const;
};

// Marks every sample with t in [onset - guard_s, offset + guard_s] of any
// blink as invalid. Other samples are untouched.
SensorSeries remove_blink_intervals(const SensorSeries& pupil, std::span<const BlinkEvent> blinks, double guard_s);

// Marks samples with confidence strictly below `min_conf` as invalid.
SensorSeries filter_low_confidence(const SensorSeries& pupil, double min_conf);

// Replaces invalid samples by linear interpolation between the nearest valid
// neighbours (constant extension at the ends). Throws TooSparse with fewer
// than two valid samples.
SensorSeries interpolate_gaps(const SensorSeries& series);

// Linear resampling of the valid samples onto t0 + k / rate_hz for
// k < ceil(span * rate_hz).
SensorSeries resample_uniform(const SensorSeries& series, double rate_hz);

// Low-pass Butterworth design: analog prototype, frequency pre-warping and
// the bilinear transform. Throws InvalidCutoff unless 0 < cutoff < rate / 2.
FilterCoefficients design_butterworth(int order, double cutoff_hz, double rate_hz);

std::complex<double> frequency_response(const FilterCoefficients& c, double f_hz, double rate_hz);

// Steady-state initial conditions for a unit step (transposed direct form II).
std::vector<double> steady_state_zi(const FilterCoefficients& c);

// Single causal pass with the given initial state.
std::vector<double> lfilter(const FilterCoefficients& c, std::span<const double> x, std::vector<double> zi);

// Forward-backward filtering with odd-extension padding of 3 * (order + 1)
// samples. Throws TooShort on shorter input.
std::vector<double> filtfilt(const FilterCoefficients& c, std::span<const double> x);

// Zero-phase low-pass of a uniformly sampled series; timestamps are kept.
SensorSeries lowpass_zero_phase(const SensorSeries& series, const FilterCoefficients& c);

// Centered moving average over k samples (k odd), shrinking at the edges.
SensorSeries moving_average(const SensorSeries& series, int k);

SensorSeries clean_pupil(const SensorSeries& pupil, std::span<const BlinkEvent> blinks, const CleaningConfig& cfg);
SensorSeries clean_eda(const SensorSeries& eda, const CleaningConfig& cfg);
SensorSeries clean_hr(const SensorSeries& hr, const CleaningConfig& cfg);

// Applies the three cleaning chains; blinks and reports are carried over.
Session clean_session(const Session& session, const CleaningConfig& cfg);

}  // namespace cogload
