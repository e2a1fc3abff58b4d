#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "internal.hpp"

namespace cogload::detail {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

LbfgsResult minimize_lbfgs(const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
                           std::vector<double> x, double gtol, int max_iter, int memory) {
  const std::size_t n = x.size();
  std::vector<double> g(n);
  double f = fg(x, g);
  std::vector<std::vector<double>> s_hist;
  std::vector<std::vector<double>> y_hist;
  std::vector<double> rho_hist;
  LbfgsResult res;
  std::vector<double> d(n);
  std::vector<double> x_new(n);
  std::vector<double> g_new(n);
  for (int it = 0; it < max_iter; ++it) {
    res.grad_norm = norm(g);
    if (res.grad_norm <= gtol) {
      res.converged = true;
      break;
    }
    // two-loop recursion
    d = g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y_hist[k][i];
    }
    double scale = 1.0 / std::max(res.grad_norm, 1.0);
    if (m > 0) scale = dot(s_hist[m - 1], y_hist[m - 1]) / dot(y_hist[m - 1], y_hist[m - 1]);
    for (double& v : d) v *= scale;
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    for (double& v : d) v = -v;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      // not a descent direction: restart from steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / std::max(res.grad_norm, 1.0);
      slope = dot(g, d);
    }

    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) break;

    std::vector<double> s(n);
    std::vector<double> yv(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      yv[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, yv);
    if (sy > 1e-12 * norm(s) * norm(yv)) {
      if (static_cast<int>(s_hist.size()) == memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
  }
  res.grad_norm = norm(g);
  res.converged = res.converged || res.grad_norm <= gtol;
  res.x = std::move(x);
  res.value = f;
  return res;
}

LinearParams fit_logreg(const Matrix& X, std::span<const int> y, const std::array<bool, 3>& present, double C,
                        bool& converged) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  std::vector<int> classes;
  for (int c = 0; c < 3; ++c) {
    if (present[static_cast<std::size_t>(c)]) classes.push_back(c);
  }
  const std::size_t K = classes.size();
  std::vector<int> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = static_cast<int>(std::find(classes.begin(), classes.end(), y[i]) - classes.begin());
  }
  const std::size_t stride = p + 1;  // weights then bias, per class
  const double inv_n = 1.0 / static_cast<double>(n);

  // mean cross-entropy + ||W||^2 / (2 C n)
  auto objective = [&](const std::vector<double>& theta, std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    std::vector<double> z(K);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = X.row(i);
      double zmax = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < K; ++k) {
        const double* w = theta.data() + k * stride;
        double v = w[p];
        for (std::size_t f = 0; f < p; ++f) v += w[f] * xi[f];
        z[k] = v;
        zmax = std::max(zmax, v);
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < K; ++k) sum += std::exp(z[k] - zmax);
      const double lse = zmax + std::log(sum);
      loss += lse - z[static_cast<std::size_t>(target[i])];
      for (std::size_t k = 0; k < K; ++k) {
        const double r = std::exp(z[k] - lse) - (static_cast<int>(k) == target[i] ? 1.0 : 0.0);
        double* gk = grad.data() + k * stride;
        for (std::size_t f = 0; f < p; ++f) gk[f] += r * xi[f];
        gk[p] += r;
      }
    }
    double reg = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t f = 0; f < p; ++f) {
        const double w = theta[k * stride + f];
        reg += w * w;
        grad[k * stride + f] += w / C;
      }
    }
    for (double& v : grad) v *= inv_n;
    return (loss + reg / (2.0 * C)) * inv_n;
  };

  const auto res = minimize_lbfgs(objective, std::vector<double>(K * stride, 0.0), 1e-6, 20000);
  converged = converged && res.converged;

  LinearParams out;
  out.weights.assign(3, std::vector<double>(p, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    const auto c = static_cast<std::size_t>(classes[k]);
    for (std::size_t f = 0; f < p; ++f) out.weights[c][f] = res.x[k * stride + f];
    out.bias[c] = res.x[k * stride + p];
  }
  return out;
}

}  // namespace cogload::detail
