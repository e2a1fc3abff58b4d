#include "cogload/stats.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "cogload/error.hpp"

namespace cogload {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::LengthMismatch, std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

double accuracy(std::span<const Level> truth, std::span<const Level> pred) {
  check_lengths(truth.size(), pred.size());
  if (truth.empty()) throw Error(ErrorCode::Empty, "accuracy of zero rows");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == pred[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double cohen_kappa(std::span<const Level> truth, std::span<const Level> pred) {
  check_lengths(truth.size(), pred.size());
  if (truth.empty()) throw Error(ErrorCode::Empty, "kappa of zero rows");
  const double n = static_cast<double>(truth.size());
  std::array<double, 3> rt{}, rp{};
  double agree = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    rt[static_cast<std::size_t>(truth[i])] += 1.0;
    rp[static_cast<std::size_t>(pred[i])] += 1.0;
    agree += truth[i] == pred[i] ? 1.0 : 0.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (std::size_t c = 0; c < 3; ++c) pe += (rt[c] / n) * (rp[c] / n);
  if (pe >= 1.0) return 0.0;
  return (po - pe) / (1.0 - pe);
}

TestResult mcnemar(std::span<const Level> truth, std::span<const Level> pred_a, std::span<const Level> pred_b,
                   McNemarOptions opt) {
  check_lengths(truth.size(), pred_a.size());
  check_lengths(truth.size(), pred_b.size());
  double b = 0.0, c = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool ra = pred_a[i] == truth[i];
    const bool rb = pred_b[i] == truth[i];
    if (ra && !rb) b += 1.0;
    if (!ra && rb) c += 1.0;
  }
  TestResult r;
  r.df = 1;
  if (b + c == 0.0) return r;
  const double diff = opt.continuity_correction ? std::max(std::abs(b - c) - 1.0, 0.0) : std::abs(b - c);
  r.statistic = diff * diff / (b + c);
  r.p_value = chi_square_sf(r.statistic, 1);
  r.effect_size = truth.size() > 1 ? r.statistic / static_cast<double>(truth.size() - 1) : 0.0;
  return r;
}

TestResult cochran_q(std::span<const Level> truth, const std::vector<std::vector<Level>>& predictions) {
  const std::size_t k = predictions.size();
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "cochran q needs at least two models");
  if (truth.empty()) throw Error(ErrorCode::Empty, "cochran q of zero rows");
  for (const auto& p : predictions) check_lengths(truth.size(), p.size());
  const std::size_t n = truth.size();
  std::vector<double> col(k, 0.0);
  double total = 0.0, row_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (predictions[j][i] == truth[i]) {
        col[j] += 1.0;
        row += 1.0;
      }
    }
    total += row;
    row_sq += row * row;
  }
  TestResult r;
  r.df = static_cast<int>(k - 1);
  const double kd = static_cast<double>(k);
  const double denom = kd * total - row_sq;
  if (denom <= 0.0) return r;
  double num = 0.0;
  for (double g : col) num += (g - total / kd) * (g - total / kd);
  r.statistic = kd * (kd - 1.0) * num / denom;
  r.p_value = chi_square_sf(r.statistic, r.df);
  r.effect_size = r.statistic / (static_cast<double>(n) * (kd - 1.0));
  return r;
}

double chi_square_sf(double x, double df) {
  if (!(df >= 1.0) || !(x >= 0.0) || !std::isfinite(df)) {
    throw Error(ErrorCode::InvalidArgument, "chi_square_sf needs x >= 0 and df >= 1");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

}  // namespace cogload
