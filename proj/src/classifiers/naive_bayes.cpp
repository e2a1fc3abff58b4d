#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cogload/error.hpp"
#include "internal.hpp"

namespace cogload::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::size_t bin_of(const std::vector<double>& edges, double x) {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

}  // namespace

NaiveBayesParams fit_naive_bayes(const Matrix& X, std::span<const int> y, const ClassifierSpec& spec) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  NaiveBayesParams nb;
  nb.variant = spec.nb_variant;
  std::array<double, 3> class_n{};
  for (int c : y) class_n[static_cast<std::size_t>(c)] += 1.0;
  for (std::size_t c = 0; c < 3; ++c) {
    nb.log_prior[c] = class_n[c] > 0 ? std::log(class_n[c] / static_cast<double>(n)) : kNegInf;
  }

  if (spec.nb_variant == NaiveBayesVariant::categorical) {
    const auto bins = static_cast<std::size_t>(spec.nb_bins);
    nb.edges.resize(p);
    for (std::size_t f = 0; f < p; ++f) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = X(i, f);
      std::sort(col.begin(), col.end());
      for (std::size_t k = 1; k < bins; ++k) {
        nb.edges[f].push_back(quantile(col, static_cast<double>(k) / static_cast<double>(bins)));
      }
    }
    std::vector<std::vector<std::vector<double>>> counts(
        3, std::vector<std::vector<double>>(p, std::vector<double>(bins, 0.0)));
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(y[i]);
      for (std::size_t f = 0; f < p; ++f) counts[c][f][bin_of(nb.edges[f], X(i, f))] += 1.0;
    }
    nb.log_likelihood = counts;
    for (std::size_t c = 0; c < 3; ++c) {
      const double denom = class_n[c] + spec.alpha * static_cast<double>(bins);
      for (std::size_t f = 0; f < p; ++f) {
        for (std::size_t b = 0; b < bins; ++b) {
          const double num = counts[c][f][b] + spec.alpha;
          nb.log_likelihood[c][f][b] = (denom > 0.0 && num > 0.0) ? std::log(num / denom) : kNegInf;
        }
      }
    }
    return nb;
  }

  // Gaussian variant: per-class moments with variance smoothing relative to
  // the largest feature variance.
  double max_var = 0.0;
  for (std::size_t f = 0; f < p; ++f) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += X(i, f);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += (X(i, f) - m) * (X(i, f) - m);
    max_var = std::max(max_var, v / static_cast<double>(n));
  }
  const double smoothing = std::max(1e-9 * max_var, 1e-12);
  nb.mean.assign(3, std::vector<double>(p, 0.0));
  nb.var.assign(3, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < p; ++f) nb.mean[static_cast<std::size_t>(y[i])][f] += X(i, f);
  }
  for (std::size_t c = 0; c < 3; ++c) {
    if (class_n[c] > 0) {
      for (double& m : nb.mean[c]) m /= class_n[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (std::size_t f = 0; f < p; ++f) {
      const double d = X(i, f) - nb.mean[c][f];
      nb.var[c][f] += d * d;
    }
  }
  for (std::size_t c = 0; c < 3; ++c) {
    for (double& v : nb.var[c]) v = (class_n[c] > 0 ? v / class_n[c] : 0.0) + smoothing;
  }
  return nb;
}

ClassCounts naive_bayes_log_joint(const NaiveBayesParams& nb, std::span<const double> x) {
  ClassCounts out{};
  for (std::size_t c = 0; c < 3; ++c) {
    double s = nb.log_prior[c];
    if (s == kNegInf) {
      out[c] = kNegInf;
      continue;
    }
    for (std::size_t f = 0; f < x.size(); ++f) {
      if (nb.variant == NaiveBayesVariant::categorical) {
        s += nb.log_likelihood[c][f][bin_of(nb.edges[f], x[f])];
      } else {
        const double v = nb.var[c][f];
        const double d = x[f] - nb.mean[c][f];
        s += -0.5 * std::log(2.0 * std::numbers::pi * v) - d * d / (2.0 * v);
      }
    }
    out[c] = s;
  }
  return out;
}

}  // namespace cogload::detail
