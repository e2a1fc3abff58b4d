#pragma once

// Reference implementations used only by the tests. They are written
// straightforwardly (two-pass statistics, quadratic scans, direct polynomial
// evaluation, numerical integration) and share no code with the library.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "cogload/features.hpp"
#include "cogload/sensor.hpp"

namespace oracle {

using FeatureMap = std::map<std::string, double>;

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);

// Stat and dynamic features of one stream under the canonical names.
FeatureMap stream_features(const std::vector<double>& t, const std::vector<double>& x, cogload::Modality m);
double ipa(const std::vector<double>& t, const std::vector<double>& x);
FeatureMap segment_features(const cogload::Segment& seg, cogload::Schema schema, bool include_ipa);

// Largest |x_j - x_i| over all weakly monotone stretches i..j.
double max_monotone_change(const std::vector<double>& x);

// |H| of an order-n digital Butterworth built with pre-warping.
double butterworth_digital_magnitude(int order, double cutoff_hz, double rate_hz, double f_hz);
double butterworth_analog_magnitude(int order, double cutoff_hz, double f_hz);
std::complex<double> transfer(const std::vector<double>& b, const std::vector<double>& a, double f_hz, double rate_hz);

// Schur-Cohn recursion: true when every root of a(z) lies inside |z| < 1.
bool schur_cohn_stable(std::vector<double> a);

// Amplitude of the best least-squares fit c + p sin + q cos at frequency f.
double sine_amplitude(const std::vector<double>& y, double f_hz, double rate_hz, std::size_t from, std::size_t to);

// Upper chi-square tail by adaptive Simpson integration of the density.
double chi_square_sf(double x, double df);

double kappa_from_confusion(const std::vector<std::vector<double>>& m);

}  // namespace oracle
