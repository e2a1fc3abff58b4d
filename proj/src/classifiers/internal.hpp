#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cogload/classifiers.hpp"
#include "cogload/random.hpp"

namespace cogload::detail {

using ClassCounts = std::array<double, 3>;

double impurity(const ClassCounts& counts, Criterion criterion);

struct TreeOptions {
  Criterion criterion = Criterion::gini;
  std::size_t max_features = 0;  // 0 considers every feature at every node
  Rng* rng = nullptr;            // required when max_features > 0
};

// CART grown until nodes are pure, hold fewer than two samples, or have no
// non-constant feature. `rows` may repeat indices (bootstrap draws).
Tree build_tree(const Matrix& X, std::span<const int> y, std::span<const std::size_t> rows, const TreeOptions& opt);

// Sum over splits of (node fraction) x (impurity decrease), per column.
std::vector<double> tree_importance(const Tree& tree, std::size_t n_features, Criterion criterion);

NaiveBayesParams fit_naive_bayes(const Matrix& X, std::span<const int> y, const ClassifierSpec& spec);
ClassCounts naive_bayes_log_joint(const NaiveBayesParams& p, std::span<const double> x);

struct SmoSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

// Dual soft-margin SVM: min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0, with
// Q_ij = y_i y_j K_ij. Second-order working-set selection; stops when the
// maximal KKT violation drops below eps.
SmoSolution solve_smo(std::span<const double> kernel, std::span<const double> y, double C, double eps = 1e-3);

LinearParams fit_linear_svm(const Matrix& X, std::span<const int> y, const std::array<bool, 3>& present, double C,
                            bool& converged);
KernelSvmParams fit_rbf_svm(const Matrix& X, std::span<const int> y, const std::array<bool, 3>& present, double C,
                            double gamma, bool& converged);

// gamma = 1 / (p * mean column variance), or 1 when all columns are constant.
double scale_gamma(const Matrix& X);

LinearParams fit_logreg(const Matrix& X, std::span<const int> y, const std::array<bool, 3>& present, double C,
                        bool& converged);

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Limited-memory BFGS with backtracking Armijo line search. `fg` returns the
// objective and writes the gradient.
LbfgsResult minimize_lbfgs(const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
                           std::vector<double> x0, double gtol, int max_iter, int memory = 10);

}  // namespace cogload::detail
