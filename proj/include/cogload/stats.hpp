#pragma once

#include <span>
#include <vector>

#include "cogload/sensor.hpp"

namespace cogload {

struct TestResult {
  double statistic = 0.0;
  int df = 1;
  double p_value = 1.0;
  double effect_size = 0.0;
};

double accuracy(std::span<const Level> truth, std::span<const Level> pred);

// 0 when chance agreement is 1 (a single class on both sides).
double cohen_kappa(std::span<const Level> truth, std::span<const Level> pred);

struct McNemarOptions {
  bool continuity_correction = true;
};

// b counts rows where a is right and b wrong; effect size chi2 / (n - 1).
TestResult mcnemar(std::span<const Level> truth, std::span<const Level> pred_a, std::span<const Level> pred_b,
                   McNemarOptions opt = {});

// Effect size Q / (n (k - 1)).
TestResult cochran_q(std::span<const Level> truth, const std::vector<std::vector<Level>>& predictions);

// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

}  // namespace cogload
