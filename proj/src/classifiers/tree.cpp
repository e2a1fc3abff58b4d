#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "internal.hpp"

namespace cogload {

std::size_t Tree::leaf(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return i;
}

namespace detail {

double impurity(const ClassCounts& counts, Criterion criterion) {
  const double total = counts[0] + counts[1] + counts[2];
  if (total <= 0.0) return 0.0;
  double out = criterion == Criterion::gini ? 1.0 : 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    if (criterion == Criterion::gini) {
      out -= p * p;
    } else {
      out -= p * std::log2(p);
    }
  }
  return std::max(0.0, out);
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double decrease = -std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, std::span<const int> y, const TreeOptions& opt) : X_(X), y_(y), opt_(opt) {
    order_.resize(X.cols());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  Tree build(std::vector<std::size_t> rows) {
    grow(rows);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t>& rows) {
    ClassCounts counts{};
    for (std::size_t r : rows) counts[static_cast<std::size_t>(y_[r])] += 1.0;
    const int index = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    node.counts = counts;
    node.impurity = impurity(counts, opt_.criterion);
    tree_.nodes.push_back(node);

    const int classes = (counts[0] > 0) + (counts[1] > 0) + (counts[2] > 0);
    if (classes <= 1 || rows.size() < 2) return index;
    const Split best = find_split(rows, counts, node.impurity);
    if (best.feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto f = static_cast<std::size_t>(best.feature);
    for (std::size_t r : rows) (X_(r, f) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    tree_.nodes[static_cast<std::size_t>(index)].feature = best.feature;
    tree_.nodes[static_cast<std::size_t>(index)].threshold = best.threshold;
    const int l = grow(left);
    const int r = grow(right);
    tree_.nodes[static_cast<std::size_t>(index)].left = l;
    tree_.nodes[static_cast<std::size_t>(index)].right = r;
    return index;
  }

  Split find_split(const std::vector<std::size_t>& rows, const ClassCounts& total, double parent_impurity) {
    const std::size_t p = X_.cols();
    const bool sampled = opt_.max_features > 0 && opt_.max_features < p;
    const double n = static_cast<double>(rows.size());
    Split best;
    std::size_t evaluated = 0;
    pairs_.resize(rows.size());
    for (std::size_t k = 0; k < p; ++k) {
      if (sampled) {
        // lazy Fisher-Yates over the remaining features
        const std::size_t j = k + static_cast<std::size_t>(opt_.rng->index(p - k));
        std::swap(order_[k], order_[j]);
      }
      const std::size_t f = sampled ? order_[k] : k;
      for (std::size_t i = 0; i < rows.size(); ++i) pairs_[i] = {X_(rows[i], f), y_[rows[i]]};
      std::sort(pairs_.begin(), pairs_.end());
      if (pairs_.front().first == pairs_.back().first) continue;
      ++evaluated;
      ClassCounts left{};
      for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
        left[static_cast<std::size_t>(pairs_[i].second)] += 1.0;
        const double a = pairs_[i].first;
        const double b = pairs_[i + 1].first;
        if (!(a < b)) continue;
        ClassCounts right{total[0] - left[0], total[1] - left[1], total[2] - left[2]};
        const double nl = static_cast<double>(i + 1);
        const double nr = n - nl;
        const double decrease = parent_impurity - (nl / n) * impurity(left, opt_.criterion) -
                                (nr / n) * impurity(right, opt_.criterion);
        if (decrease > best.decrease) {
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;
          best = {static_cast<int>(f), mid, decrease};
        }
      }
      if (sampled && evaluated >= opt_.max_features) break;
    }
    return best;
  }

  const Matrix& X_;
  std::span<const int> y_;
  TreeOptions opt_;
  std::vector<std::size_t> order_;
  std::vector<std::pair<double, int>> pairs_;
  Tree tree_;
};

}  // namespace

Tree build_tree(const Matrix& X, std::span<const int> y, std::span<const std::size_t> rows, const TreeOptions& opt) {
  TreeBuilder builder(X, y, opt);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

std::vector<double> tree_importance(const Tree& tree, std::size_t n_features, Criterion criterion) {
  std::vector<double> out(n_features, 0.0);
  if (tree.nodes.empty()) return out;
  auto weight = [](const TreeNode& n) { return n.counts[0] + n.counts[1] + n.counts[2]; };
  const double root = weight(tree.nodes[0]);
  for (const auto& node : tree.nodes) {
    if (node.feature < 0) continue;
    const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
    const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
    const double gain = weight(node) * impurity(node.counts, criterion) - weight(l) * impurity(l.counts, criterion) -
                        weight(r) * impurity(r.counts, criterion);
    out[static_cast<std::size_t>(node.feature)] += std::max(0.0, gain) / root;
  }
  return out;
}

}  // namespace detail
}  // namespace cogload
