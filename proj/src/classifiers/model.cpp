#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "cogload/csv.hpp"
#include "cogload/error.hpp"
#include "internal.hpp"

namespace cogload {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string trim_number(double v) { return csv::format_double(v); }

}  // namespace

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::nb: return "nb";
    case ClassifierKind::dt: return "dt";
    case ClassifierKind::svm_linear: return "svm_linear";
    case ClassifierKind::svm_rbf: return "svm_rbf";
    case ClassifierKind::logreg: return "logreg";
    case ClassifierKind::rf: return "rf";
  }
  return "unknown";
}

std::optional<ClassifierKind> parse_kind(std::string_view text) {
  for (auto k : kAllKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Criterion c) { return c == Criterion::gini ? "gini" : "entropy"; }

std::optional<Criterion> parse_criterion(std::string_view text) {
  if (text == "gini") return Criterion::gini;
  if (text == "entropy") return Criterion::entropy;
  return std::nullopt;
}

std::string ClassifierSpec::describe() const {
  switch (kind) {
    case ClassifierKind::nb:
      return "alpha=" + trim_number(alpha) +
             (nb_variant == NaiveBayesVariant::gaussian ? ";variant=gaussian" : "");
    case ClassifierKind::dt: return "criterion=" + std::string(to_string(criterion));
    case ClassifierKind::svm_linear: return "C=" + trim_number(C);
    case ClassifierKind::svm_rbf: return "C=" + trim_number(C) + (gamma ? ";gamma=" + trim_number(*gamma) : "");
    case ClassifierKind::logreg: return "C=" + trim_number(C);
    case ClassifierKind::rf: return "n_trees=" + std::to_string(n_trees);
  }
  return {};
}

void ClassifierSpec::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidParams, std::string(to_string(kind)) + ": " + why);
  };
  if (!(alpha >= 0.0)) fail("alpha must be >= 0");
  if (nb_bins < 2) fail("nb_bins must be >= 2");
  if (!(C > 0.0)) fail("C must be positive");
  if (gamma && !(*gamma > 0.0)) fail("gamma must be positive");
  if (n_trees < 1) fail("n_trees must be >= 1");
}

// ---------------------------------------------------------------------------
// Standardizer

Standardizer standardize_fit(const Matrix& X) {
  Standardizer s;
  const std::size_t n = X.rows();
  s.mean.assign(X.cols(), 0.0);
  s.sd.assign(X.cols(), 0.0);
  for (std::size_t f = 0; f < X.cols(); ++f) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += X(i, f);
    m = n > 0 ? m / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (X(i, f) - m) * (X(i, f) - m);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.mean[f] = m;
    s.sd[f] = sd > 0.0 ? sd : 0.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  if (X.cols() != mean.size()) throw Error(ErrorCode::SchemaMismatch, "standardizer width differs from input");
  Matrix out = X;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t f = 0; f < X.cols(); ++f) {
      if (sd[f] > 0.0) out(i, f) = (X(i, f) - mean[f]) / sd[f];
    }
  }
  return out;
}

Matrix Standardizer::invert(const Matrix& Z) const {
  if (Z.cols() != mean.size()) throw Error(ErrorCode::SchemaMismatch, "standardizer width differs from input");
  Matrix out = Z;
  for (std::size_t i = 0; i < Z.rows(); ++i) {
    for (std::size_t f = 0; f < Z.cols(); ++f) {
      if (sd[f] > 0.0) out(i, f) = Z(i, f) * sd[f] + mean[f];
    }
  }
  return out;
}

Matrix standardize_apply(const Standardizer& s, const Matrix& X) { return s.apply(X); }

// ---------------------------------------------------------------------------
// fit / predict

namespace {

std::vector<std::size_t> canonical_order(const Matrix& X) {
  std::vector<std::size_t> order(X.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < X.rows(); ++i) {
      if (X(i, a) < X(i, b)) return true;
      if (X(i, b) < X(i, a)) return false;
    }
    return false;
  });
  return order;
}

bool uses_standardizer(ClassifierKind k) {
  return k == ClassifierKind::svm_linear || k == ClassifierKind::svm_rbf || k == ClassifierKind::logreg;
}

Matrix to_internal(const TrainedModel& m, const Matrix& X) {
  if (X.cols() != m.feature_order.size()) {
    throw Error(ErrorCode::SchemaMismatch, "expected " + std::to_string(m.feature_order.size()) + " features, got " +
                                               std::to_string(X.cols()));
  }
  const Matrix scaled = m.standardizer ? m.standardizer->apply(X) : X;
  return scaled.select_cols(m.feature_order);
}

int leaf_class(const TreeNode& leaf) {
  int best = 0;
  for (int c = 1; c < 3; ++c) {
    if (leaf.counts[static_cast<std::size_t>(c)] > leaf.counts[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

}  // namespace

TrainedModel fit(const ClassifierSpec& spec, const Matrix& X, std::span<const Level> y, FeatureSchema schema,
                 double window_s) {
  spec.validate();
  if (X.rows() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(X.rows()) + " rows vs " + std::to_string(y.size()) + " labels");
  }
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "feature matrix contains a non-finite value");
  }
  if (schema.names.empty()) {
    for (std::size_t f = 0; f < X.cols(); ++f) schema.names.push_back("f" + std::to_string(f));
  }
  if (schema.groups.empty()) schema.groups.assign(schema.names.size(), Modality::pupil);
  if (schema.names.size() != X.cols() || schema.groups.size() != X.cols()) {
    throw Error(ErrorCode::SchemaMismatch, "schema size differs from feature matrix width");
  }

  TrainedModel m;
  m.spec = spec;
  m.schema = std::move(schema);
  m.window_s = window_s;
  std::vector<int> labels(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    labels[i] = static_cast<int>(y[i]);
    m.class_present[static_cast<std::size_t>(labels[i])] = true;
  }
  if (std::count(m.class_present.begin(), m.class_present.end(), true) < 2) {
    throw Error(ErrorCode::DegenerateLabels, "training labels contain fewer than two classes");
  }
  m.feature_order = canonical_order(X);
  if (uses_standardizer(spec.kind)) m.standardizer = standardize_fit(X);
  const Matrix Xi = to_internal(m, X);

  switch (spec.kind) {
    case ClassifierKind::nb:
      m.params = detail::fit_naive_bayes(Xi, labels, spec);
      break;
    case ClassifierKind::dt: {
      std::vector<std::size_t> rows(Xi.rows());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      m.params = TreeParams{detail::build_tree(Xi, labels, rows, {spec.criterion, 0, nullptr})};
      break;
    }
    case ClassifierKind::svm_linear:
      m.params = detail::fit_linear_svm(Xi, labels, m.class_present, spec.C, m.converged);
      break;
    case ClassifierKind::svm_rbf: {
      const double gamma = spec.gamma ? *spec.gamma : detail::scale_gamma(Xi);
      m.params = detail::fit_rbf_svm(Xi, labels, m.class_present, spec.C, gamma, m.converged);
      break;
    }
    case ClassifierKind::logreg:
      m.params = detail::fit_logreg(Xi, labels, m.class_present, spec.C, m.converged);
      break;
    case ClassifierKind::rf: {
      ForestParams forest;
      forest.trees.resize(static_cast<std::size_t>(spec.n_trees));
      const std::size_t n = Xi.rows();
      const auto max_features =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(Xi.cols())))));
      for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        Rng rng(derive_seed(spec.seed, t));
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = static_cast<std::size_t>(rng.index(n));
        forest.trees[t] = detail::build_tree(Xi, labels, rows, {spec.criterion, max_features, &rng});
      }
      m.params = std::move(forest);
      break;
    }
  }
  return m;
}

Matrix decision_scores(const TrainedModel& m, const Matrix& X) {
  const Matrix Xi = to_internal(m, X);
  Matrix out(Xi.rows(), 3, kNegInf);
  auto softmax_present = [&](std::size_t i, std::array<double, 3> z) {
    double zmax = kNegInf;
    for (std::size_t c = 0; c < 3; ++c) {
      if (m.class_present[c]) zmax = std::max(zmax, z[c]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      if (m.class_present[c] && z[c] > kNegInf) sum += std::exp(z[c] - zmax);
    }
    for (std::size_t c = 0; c < 3; ++c) {
      if (m.class_present[c]) out(i, c) = z[c] > kNegInf ? std::exp(z[c] - zmax) / sum : 0.0;
    }
  };

  for (std::size_t i = 0; i < Xi.rows(); ++i) {
    const auto x = Xi.row(i);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, NaiveBayesParams>) {
            softmax_present(i, detail::naive_bayes_log_joint(p, x));
          } else if constexpr (std::is_same_v<T, TreeParams>) {
            const auto& leaf = p.tree.nodes[p.tree.leaf(x)];
            const double total = leaf.counts[0] + leaf.counts[1] + leaf.counts[2];
            for (std::size_t c = 0; c < 3; ++c) {
              if (m.class_present[c]) out(i, c) = leaf.counts[c] / total;
            }
          } else if constexpr (std::is_same_v<T, LinearParams>) {
            std::array<double, 3> z{kNegInf, kNegInf, kNegInf};
            for (std::size_t c = 0; c < 3; ++c) {
              if (!m.class_present[c]) continue;
              double v = p.bias[c];
              for (std::size_t f = 0; f < x.size(); ++f) v += p.weights[c][f] * x[f];
              z[c] = v;
            }
            if (m.spec.kind == ClassifierKind::logreg) {
              softmax_present(i, z);
            } else {
              for (std::size_t c = 0; c < 3; ++c) out(i, c) = z[c];
            }
          } else if constexpr (std::is_same_v<T, KernelSvmParams>) {
            std::vector<double> k(p.support.rows());
            for (std::size_t s = 0; s < k.size(); ++s) {
              const auto sv = p.support.row(s);
              double d = 0.0;
              for (std::size_t f = 0; f < x.size(); ++f) d += (sv[f] - x[f]) * (sv[f] - x[f]);
              k[s] = std::exp(-p.gamma * d);
            }
            for (std::size_t c = 0; c < 3; ++c) {
              if (!m.class_present[c]) continue;
              double v = p.bias[c];
              for (std::size_t s = 0; s < k.size(); ++s) v += p.coef[c][s] * k[s];
              out(i, c) = v;
            }
          } else if constexpr (std::is_same_v<T, ForestParams>) {
            std::array<double, 3> votes{};
            for (const auto& tree : p.trees) votes[static_cast<std::size_t>(leaf_class(tree.nodes[tree.leaf(x)]))] += 1.0;
            for (std::size_t c = 0; c < 3; ++c) {
              if (m.class_present[c]) out(i, c) = votes[c] / static_cast<double>(p.trees.size());
            }
          }
        },
        m.params);
  }
  return out;
}

std::vector<Level> predict(const TrainedModel& m, const Matrix& X) {
  const Matrix scores = decision_scores(m, X);
  std::vector<Level> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    std::size_t best = 3;
    for (std::size_t c = 0; c < 3; ++c) {
      if (!m.class_present[c]) continue;
      if (best == 3 || scores(i, c) > scores(i, best)) best = c;
    }
    out[i] = static_cast<Level>(best);
  }
  return out;
}

ImportanceReport gini_importance(const TrainedModel& m) {
  const auto* forest = std::get_if<ForestParams>(&m.params);
  if (m.spec.kind != ClassifierKind::rf || forest == nullptr) {
    throw Error(ErrorCode::WrongKind, "gini importance needs a random forest, got " + std::string(to_string(m.spec.kind)));
  }
  const std::size_t p = m.feature_order.size();
  std::vector<double> internal(p, 0.0);
  std::size_t used = 0;
  for (const auto& tree : forest->trees) {
    auto imp = detail::tree_importance(tree, p, m.spec.criterion);
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total <= 0.0) continue;
    for (std::size_t f = 0; f < p; ++f) internal[f] += imp[f] / total;
    ++used;
  }
  ImportanceReport r;
  r.features = m.schema.names;
  r.groups = m.schema.groups;
  r.importance.assign(p, 0.0);
  const double total = std::accumulate(internal.begin(), internal.end(), 0.0);
  for (std::size_t f = 0; f < p; ++f) {
    r.importance[m.feature_order[f]] = (used > 0 && total > 0.0) ? internal[f] / total : 1.0 / static_cast<double>(p);
  }
  for (std::size_t f = 0; f < p; ++f) r.group_percent[static_cast<std::size_t>(r.groups[f])] += 100.0 * r.importance[f];
  return r;
}

// ---------------------------------------------------------------------------
// JSON persistence

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

ojson node_json(const Tree& t, std::size_t i) {
  const auto& n = t.nodes[i];
  ojson j;
  j["counts"] = n.counts;
  j["impurity"] = n.impurity;
  if (n.feature >= 0) {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["left"] = node_json(t, static_cast<std::size_t>(n.left));
    j["right"] = node_json(t, static_cast<std::size_t>(n.right));
  }
  return j;
}

int read_node(const json& j, Tree& t) {
  const int index = static_cast<int>(t.nodes.size());
  TreeNode n;
  n.counts = j.at("counts").get<std::array<double, 3>>();
  n.impurity = j.at("impurity").get<double>();
  t.nodes.push_back(n);
  if (j.contains("feature")) {
    t.nodes[static_cast<std::size_t>(index)].feature = j.at("feature").get<int>();
    t.nodes[static_cast<std::size_t>(index)].threshold = j.at("threshold").get<double>();
    const int l = read_node(j.at("left"), t);
    const int r = read_node(j.at("right"), t);
    t.nodes[static_cast<std::size_t>(index)].left = l;
    t.nodes[static_cast<std::size_t>(index)].right = r;
  }
  return index;
}

// JSON has no infinities; absent classes are written as null.
ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }
double from_nullable(const json& j) { return j.is_null() ? kNegInf : j.get<double>(); }

ojson matrix_json(const Matrix& M) {
  ojson j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  j["data"] = M.data();
  return j;
}

Matrix read_matrix(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) throw Error(ErrorCode::SchemaMismatch, "matrix data size mismatch");
  Matrix M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) M(r, c) = data[r * cols + c];
  }
  return M;
}

ojson spec_json(const ClassifierSpec& s) {
  ojson j;
  j["kind"] = to_string(s.kind);
  j["alpha"] = s.alpha;
  j["nb_variant"] = s.nb_variant == NaiveBayesVariant::gaussian ? "gaussian" : "categorical";
  j["nb_bins"] = s.nb_bins;
  j["criterion"] = to_string(s.criterion);
  j["C"] = s.C;
  j["gamma"] = s.gamma ? ojson(*s.gamma) : ojson(nullptr);
  j["n_trees"] = s.n_trees;
  j["seed"] = s.seed;
  return j;
}

ClassifierSpec read_spec(const json& j) {
  ClassifierSpec s;
  auto kind = parse_kind(j.at("kind").get<std::string>());
  auto crit = parse_criterion(j.at("criterion").get<std::string>());
  if (!kind || !crit) throw Error(ErrorCode::SchemaMismatch, "unknown classifier kind or criterion");
  s.kind = *kind;
  s.criterion = *crit;
  s.alpha = j.at("alpha").get<double>();
  s.nb_variant = j.at("nb_variant").get<std::string>() == "gaussian" ? NaiveBayesVariant::gaussian
                                                                       : NaiveBayesVariant::categorical;
  s.nb_bins = j.at("nb_bins").get<int>();
  s.C = j.at("C").get<double>();
  if (!j.at("gamma").is_null()) s.gamma = j.at("gamma").get<double>();
  s.n_trees = j.at("n_trees").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

template <std::size_t N>
ojson array_json(const std::array<double, N>& a) {
  ojson j = ojson::array();
  for (double v : a) j.push_back(finite_or_null(v));
  return j;
}

std::array<double, 3> read_array3(const json& j) {
  return {from_nullable(j.at(0)), from_nullable(j.at(1)), from_nullable(j.at(2))};
}

}  // namespace

nlohmann::ordered_json to_json(const TrainedModel& m) {
  ojson j;
  j["format"] = "cogload-model/1";
  j["spec"] = spec_json(m.spec);
  j["window_s"] = m.window_s;
  j["features"] = m.schema.names;
  ojson groups = ojson::array();
  for (auto g : m.schema.groups) groups.push_back(to_string(g));
  j["groups"] = groups;
  j["classes"] = {"low", "moderate", "high"};
  j["class_present"] = m.class_present;
  j["feature_order"] = m.feature_order;
  if (m.standardizer) {
    j["standardizer"] = {{"mean", m.standardizer->mean}, {"sd", m.standardizer->sd}};
  } else {
    j["standardizer"] = nullptr;
  }
  j["converged"] = m.converged;
  ojson p;
  std::visit(
      [&](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, NaiveBayesParams>) {
          p["family"] = "naive_bayes";
          p["log_prior"] = array_json(params.log_prior);
          if (params.variant == NaiveBayesVariant::categorical) {
            p["edges"] = params.edges;
            ojson ll = ojson::array();
            for (const auto& per_class : params.log_likelihood) {
              ojson c = ojson::array();
              for (const auto& per_feature : per_class) {
                ojson f = ojson::array();
                for (double v : per_feature) f.push_back(finite_or_null(v));
                c.push_back(f);
              }
              ll.push_back(c);
            }
            p["log_likelihood"] = ll;
          } else {
            p["mean"] = params.mean;
            p["var"] = params.var;
          }
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          p["family"] = "tree";
          p["tree"] = node_json(params.tree, 0);
        } else if constexpr (std::is_same_v<T, LinearParams>) {
          p["family"] = "linear";
          p["weights"] = params.weights;
          p["bias"] = params.bias;
        } else if constexpr (std::is_same_v<T, KernelSvmParams>) {
          p["family"] = "kernel_svm";
          p["gamma"] = params.gamma;
          p["support"] = matrix_json(params.support);
          p["coef"] = params.coef;
          p["bias"] = params.bias;
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          p["family"] = "forest";
          ojson trees = ojson::array();
          for (const auto& t : params.trees) trees.push_back(node_json(t, 0));
          p["trees"] = trees;
        }
      },
      m.params);
  j["params"] = p;
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    TrainedModel m;
    m.spec = read_spec(j.at("spec"));
    m.window_s = j.at("window_s").get<double>();
    m.schema.names = j.at("features").get<std::vector<std::string>>();
    for (const auto& g : j.at("groups")) {
      auto mod = parse_modality(g.get<std::string>());
      if (!mod) throw Error(ErrorCode::SchemaMismatch, "unknown feature group");
      m.schema.groups.push_back(*mod);
    }
    m.class_present = j.at("class_present").get<std::array<bool, 3>>();
    m.feature_order = j.at("feature_order").get<std::vector<std::size_t>>();
    if (!j.at("standardizer").is_null()) {
      Standardizer s;
      s.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
      s.sd = j.at("standardizer").at("sd").get<std::vector<double>>();
      m.standardizer = std::move(s);
    }
    m.converged = j.at("converged").get<bool>();
    const auto& p = j.at("params");
    const auto family = p.at("family").get<std::string>();
    if (family == "naive_bayes") {
      NaiveBayesParams nb;
      nb.variant = m.spec.nb_variant;
      nb.log_prior = read_array3(p.at("log_prior"));
      if (nb.variant == NaiveBayesVariant::categorical) {
        nb.edges = p.at("edges").get<std::vector<std::vector<double>>>();
        for (const auto& per_class : p.at("log_likelihood")) {
          std::vector<std::vector<double>> c;
          for (const auto& per_feature : per_class) {
            std::vector<double> f;
            for (const auto& v : per_feature) f.push_back(from_nullable(v));
            c.push_back(std::move(f));
          }
          nb.log_likelihood.push_back(std::move(c));
        }
      } else {
        nb.mean = p.at("mean").get<std::vector<std::vector<double>>>();
        nb.var = p.at("var").get<std::vector<std::vector<double>>>();
      }
      m.params = std::move(nb);
    } else if (family == "tree") {
      TreeParams t;
      read_node(p.at("tree"), t.tree);
      m.params = std::move(t);
    } else if (family == "linear") {
      LinearParams lp;
      lp.weights = p.at("weights").get<std::vector<std::vector<double>>>();
      lp.bias = p.at("bias").get<std::array<double, 3>>();
      m.params = std::move(lp);
    } else if (family == "kernel_svm") {
      KernelSvmParams kp;
      kp.gamma = p.at("gamma").get<double>();
      kp.support = read_matrix(p.at("support"));
      kp.coef = p.at("coef").get<std::vector<std::vector<double>>>();
      kp.bias = p.at("bias").get<std::array<double, 3>>();
      m.params = std::move(kp);
    } else if (family == "forest") {
      ForestParams fp;
      for (const auto& tj : p.at("trees")) {
        Tree t;
        read_node(tj, t);
        fp.trees.push_back(std::move(t));
      }
      m.params = std::move(fp);
    } else {
      throw Error(ErrorCode::SchemaMismatch, "unknown model family " + family);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("model document: ") + e.what());
  }
}

void save_model(const TrainedModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, path.string());
  out << to_json(m).dump() << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace cogload
