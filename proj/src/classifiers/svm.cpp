#include <algorithm>
#include <cmath>
#include <limits>

#include "internal.hpp"

namespace cogload::detail {

SmoSolution solve_smo(std::span<const double> K, std::span<const double> y, double C, double eps) {
  const std::size_t n = y.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTau = 1e-12;
  SmoSolution sol;
  sol.alpha.assign(n, 0.0);
  auto& alpha = sol.alpha;
  std::vector<double> G(n, -1.0);  // gradient of the dual objective
  auto k = [&](std::size_t i, std::size_t j) { return K[i * n + j]; };
  auto is_upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  const std::size_t max_iter = std::max<std::size_t>(10'000'000, 100 * n);
  for (;;) {
    // i: maximal violating index from I_up
    double gmax = -kInf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!is_upper(t) && -G[t] >= gmax) gmax = -G[t], i = t;
      } else {
        if (!is_lower(t) && G[t] >= gmax) gmax = G[t], i = t;
      }
    }
    // j: second-order choice from I_low
    double gmax2 = -kInf;
    double best_obj = kInf;
    std::size_t j = n;
    for (std::size_t t = 0; t < n && i < n; ++t) {
      if (y[t] > 0) {
        if (is_lower(t)) continue;
        const double diff = gmax + G[t];
        gmax2 = std::max(gmax2, G[t]);
        if (diff > 0) {
          const double quad = std::max(k(i, i) + k(t, t) - 2.0 * k(i, t), kTau);
          const double obj = -(diff * diff) / quad;
          if (obj <= best_obj) best_obj = obj, j = t;
        }
      } else {
        if (is_upper(t)) continue;
        const double diff = gmax - G[t];
        gmax2 = std::max(gmax2, -G[t]);
        if (diff > 0) {
          const double quad = std::max(k(i, i) + k(t, t) - 2.0 * k(i, t), kTau);
          const double obj = -(diff * diff) / quad;
          if (obj <= best_obj) best_obj = obj, j = t;
        }
      }
    }
    if (i == n || j == n || gmax + gmax2 < eps) break;
    if (++sol.iterations >= max_iter) {
      sol.converged = false;
      break;
    }

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    const double quad = std::max(k(i, i) + k(j, j) - 2.0 * k(i, j), kTau);
    if (y[i] != y[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) alpha[j] = 0, alpha[i] = diff;
      } else {
        if (alpha[i] < 0) alpha[i] = 0, alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) alpha[i] = C, alpha[j] = C - diff;
      } else {
        if (alpha[j] > C) alpha[j] = C, alpha[i] = C + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) alpha[i] = C, alpha[j] = sum - C;
      } else {
        if (alpha[j] < 0) alpha[j] = 0, alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) alpha[j] = C, alpha[i] = sum - C;
      } else {
        if (alpha[i] < 0) alpha[i] = 0, alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += y[t] * (y[i] * k(t, i) * di + y[j] * k(t, j) * dj);
    }
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = kInf;
  double lb = -kInf;
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (is_upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (is_lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return sol;
}

namespace {

std::vector<double> gram(const Matrix& X, double gamma, bool rbf) {
  const std::size_t n = X.rows();
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = X.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto xj = X.row(j);
      double v = 0.0;
      if (rbf) {
        for (std::size_t f = 0; f < xi.size(); ++f) v += (xi[f] - xj[f]) * (xi[f] - xj[f]);
        v = std::exp(-gamma * v);
      } else {
        for (std::size_t f = 0; f < xi.size(); ++f) v += xi[f] * xj[f];
      }
      K[i * n + j] = v;
      K[j * n + i] = v;
    }
  }
  return K;
}

std::vector<double> one_vs_rest(std::span<const int> y, int cls) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] == cls ? 1.0 : -1.0;
  return out;
}

}  // namespace

double scale_gamma(const Matrix& X) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  double total = 0.0;
  for (std::size_t f = 0; f < p; ++f) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += X(i, f);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += (X(i, f) - m) * (X(i, f) - m);
    total += v / static_cast<double>(n);
  }
  const double mean_var = p > 0 ? total / static_cast<double>(p) : 0.0;
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(p) * mean_var) : 1.0;
}

LinearParams fit_linear_svm(const Matrix& X, std::span<const int> y, const std::array<bool, 3>& present, double C,
                            bool& converged) {
  const auto K = gram(X, 0.0, false);
  LinearParams out;
  out.weights.assign(3, std::vector<double>(X.cols(), 0.0));
  for (int c = 0; c < 3; ++c) {
    if (!present[static_cast<std::size_t>(c)]) continue;
    const auto yc = one_vs_rest(y, c);
    const auto sol = solve_smo(K, yc, C);
    converged = converged && sol.converged;
    auto& w = out.weights[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < X.rows(); ++i) {
      if (sol.alpha[i] == 0.0) continue;
      const double a = sol.alpha[i] * yc[i];
      const auto xi = X.row(i);
      for (std::size_t f = 0; f < w.size(); ++f) w[f] += a * xi[f];
    }
    out.bias[static_cast<std::size_t>(c)] = -sol.rho;
  }
  return out;
}

KernelSvmParams fit_rbf_svm(const Matrix& X, std::span<const int> y, const std::array<bool, 3>& present, double C,
                            double gamma, bool& converged) {
  const auto K = gram(X, gamma, true);
  const std::size_t n = X.rows();
  std::vector<std::vector<double>> coef(3, std::vector<double>(n, 0.0));
  KernelSvmParams out;
  out.gamma = gamma;
  for (int c = 0; c < 3; ++c) {
    if (!present[static_cast<std::size_t>(c)]) continue;
    const auto yc = one_vs_rest(y, c);
    const auto sol = solve_smo(K, yc, C);
    converged = converged && sol.converged;
    for (std::size_t i = 0; i < n; ++i) coef[static_cast<std::size_t>(c)][i] = sol.alpha[i] * yc[i];
    out.bias[static_cast<std::size_t>(c)] = -sol.rho;
  }
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (coef[0][i] != 0.0 || coef[1][i] != 0.0 || coef[2][i] != 0.0) support.push_back(i);
  }
  out.support = X.select_rows(support);
  out.coef.assign(3, {});
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i : support) out.coef[c].push_back(coef[c][i]);
  }
  return out;
}

}  // namespace cogload::detail
