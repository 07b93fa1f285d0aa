#ifndef BOOSTRP_TREE_HPP
#define BOOSTRP_TREE_HPP

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "boostrp/data.hpp"

namespace boostrp {

struct TreeConfig {
  /// Leaf budget; 2 gives a stump.
  Index max_leaves = 2;
  /// Features drawn per node without replacement; 0 means all of them.
  Index k_features = 0;
  Index min_samples_leaf = 1;
  RngSeed seed{};
};

/// Internal nodes test x[feature] <= threshold (true goes left). Leaves point
/// into the leaf-value table.
struct TreeNode {
  Index feature = -1;
  double threshold = 0.0;
  Index left = -1;
  Index right = -1;
  Index leaf = -1;
  Index n_samples = 0;

  bool is_leaf() const noexcept { return leaf >= 0; }
};

/// Axis-aligned binary regression tree with scalar (c = 1) or vector leaves.
/// Nodes and leaves are numbered in preorder.
class RegressionTree {
 public:
  RegressionTree() = default;
  RegressionTree(std::vector<TreeNode> nodes, Matrix leaf_values, Index n_features)
      : nodes_(std::move(nodes)), leaf_values_(std::move(leaf_values)), n_features_(n_features) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const Matrix& leaf_values() const noexcept { return leaf_values_; }
  Index n_leaves() const noexcept { return leaf_values_.rows(); }
  Index n_outputs() const noexcept { return leaf_values_.cols(); }
  Index n_features() const noexcept { return n_features_; }

  /// Leaf index reached by each row of x.
  std::vector<Index> apply(const Matrix& x) const {
    check_features(x);
    std::vector<Index> out(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
      Index t = 0;
      while (!nodes_[static_cast<std::size_t>(t)].is_leaf()) {
        const auto& nd = nodes_[static_cast<std::size_t>(t)];
        t = x(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
      }
      out[static_cast<std::size_t>(i)] = nodes_[static_cast<std::size_t>(t)].leaf;
    }
    return out;
  }

  Matrix predict(const Matrix& x) const {
    const auto leaves = apply(x);
    Matrix out(x.rows(), n_outputs());
    for (Index i = 0; i < x.rows(); ++i) out.row(i) = leaf_values_.row(leaves[static_cast<std::size_t>(i)]);
    return out;
  }

  /// Same structure, new leaf table (counts refreshed from the routed rows).
  RegressionTree with_leaves(Matrix values, const std::vector<Index>& counts) const {
    RegressionTree t(nodes_, std::move(values), n_features_);
    // Internal counts are sums of their children; preorder means children come later.
    for (auto it = t.nodes_.rbegin(); it != t.nodes_.rend(); ++it) {
      if (it->is_leaf())
        it->n_samples = counts[static_cast<std::size_t>(it->leaf)];
      else
        it->n_samples = t.nodes_[static_cast<std::size_t>(it->left)].n_samples +
                        t.nodes_[static_cast<std::size_t>(it->right)].n_samples;
    }
    return t;
  }

 private:
  void check_features(const Matrix& x) const {
    if (x.cols() != n_features_)
      throw ShapeError("tree expects " + std::to_string(n_features_) + " features, got " + std::to_string(x.cols()));
  }

  std::vector<TreeNode> nodes_;
  Matrix leaf_values_;
  Index n_features_ = 0;
};

/// Per-feature sample order, shared across the many trees fitted on one X.
class SortedFeatures {
 public:
  SortedFeatures() = default;
  explicit SortedFeatures(const Matrix& x) : order_(static_cast<std::size_t>(x.cols())) {
    for (Index f = 0; f < x.cols(); ++f) {
      auto& o = order_[static_cast<std::size_t>(f)];
      o.resize(static_cast<std::size_t>(x.rows()));
      std::iota(o.begin(), o.end(), Index{0});
      std::stable_sort(o.begin(), o.end(), [&](Index a, Index b) { return x(a, f) < x(b, f); });
    }
  }
  const std::vector<Index>& order(Index f) const { return order_[static_cast<std::size_t>(f)]; }
  Index n_features() const noexcept { return static_cast<Index>(order_.size()); }

 private:
  std::vector<std::vector<Index>> order_;
};

struct SplitCandidate {
  Index feature = -1;
  double threshold = 0.0;
  /// Decrease of the summed per-output n * variance.
  double gain = 0.0;

  bool valid() const noexcept { return feature >= 0; }
};

namespace detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Midpoint between consecutive distinct values that still sends `lo` left and `hi` right.
inline double midpoint(double lo, double hi) {
  const double t = lo + 0.5 * (hi - lo);
  return (t >= hi || t < lo) ? lo : t;
}

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, const Matrix& y, const TreeConfig& cfg, const SortedFeatures& sorted)
      : x_(x), y_(y), cfg_(cfg), sorted_(sorted), rng_(make_rng(cfg.seed)) {}

  RegressionTree grow() {
    const Index n = x_.rows();
    const Index c = y_.cols();
    node_of_.assign(static_cast<std::size_t>(n), 0);
    raw_.push_back(RawNode{});
    raw_[0].n_samples = n;
    sum_left_.resize(c);
    total_.resize(c);
    mean_.resize(c);

    std::priority_queue<Pending, std::vector<Pending>, PendingOrder> queue;
    auto consider = [&](Index node) {
      auto best = best_split(node);
      if (best.valid()) queue.push(Pending{best, node});
    };
    consider(0);

    Index leaves = 1;
    while (leaves < cfg_.max_leaves && !queue.empty()) {
      const Pending top = queue.top();
      queue.pop();
      const Index left = static_cast<Index>(raw_.size());
      const Index right = left + 1;
      raw_.push_back(RawNode{});
      raw_.push_back(RawNode{});
      auto& parent = raw_[static_cast<std::size_t>(top.node)];
      parent.feature = top.split.feature;
      parent.threshold = top.split.threshold;
      parent.left = left;
      parent.right = right;
      for (Index i = 0; i < n; ++i) {
        auto& owner = node_of_[static_cast<std::size_t>(i)];
        if (owner != top.node) continue;
        owner = x_(i, top.split.feature) <= top.split.threshold ? left : right;
        ++raw_[static_cast<std::size_t>(owner)].n_samples;
      }
      ++leaves;
      consider(left);
      consider(right);
    }
    return finish();
  }

 private:
  struct RawNode {
    Index feature = -1;
    double threshold = 0.0;
    Index left = -1;
    Index right = -1;
    Index n_samples = 0;
  };
  struct Pending {
    SplitCandidate split;
    Index node;
  };
  struct PendingOrder {
    // Largest gain first; earlier node wins ties.
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
      return a.node > b.node;
    }
  };

  SplitCandidate best_split(Index node) {
    const Index n_node = raw_[static_cast<std::size_t>(node)].n_samples;
    const Index c = y_.cols();
    const Index msl = std::max<Index>(cfg_.min_samples_leaf, 1);
    if (n_node < 2 * msl) return {};

    // Node mean, impurity and constancy check.
    mean_.setZero();
    for (Index i = 0; i < x_.rows(); ++i)
      if (node_of_[static_cast<std::size_t>(i)] == node) mean_ += y_.row(i).transpose();
    mean_ /= static_cast<double>(n_node);
    double sse = 0.0;
    bool constant = true;
    Index first = -1;
    for (Index i = 0; i < x_.rows(); ++i) {
      if (node_of_[static_cast<std::size_t>(i)] != node) continue;
      if (first < 0) first = i;
      sse += (y_.row(i).transpose() - mean_).squaredNorm();
      if (constant && (y_.row(i).array() != y_.row(first).array()).any()) constant = false;
    }
    if (constant || !(sse > 0)) return {};
    const double min_gain = 1e-12 * sse;

    const Index p = x_.cols();
    std::vector<Index> features(static_cast<std::size_t>(p));
    std::iota(features.begin(), features.end(), Index{0});
    const Index k = (cfg_.k_features <= 0 || cfg_.k_features >= p) ? p : cfg_.k_features;
    if (k < p) {
      for (Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Index> pick(i, p - 1);
        std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(pick(rng_))]);
      }
      features.resize(static_cast<std::size_t>(k));
      std::sort(features.begin(), features.end());
    }

    // Centered sums: total is ~0, which keeps S^2/n terms well conditioned.
    total_.setZero();
    for (Index i = 0; i < x_.rows(); ++i)
      if (node_of_[static_cast<std::size_t>(i)] == node) total_ += y_.row(i).transpose() - mean_;
    const double base = total_.squaredNorm() / static_cast<double>(n_node);

    SplitCandidate best;
    for (const Index f : features) {
      sum_left_.setZero();
      Index n_left = 0;
      double prev_x = 0.0;
      for (const Index i : sorted_.order(f)) {
        if (node_of_[static_cast<std::size_t>(i)] != node) continue;
        const double xi = x_(i, f);
        if (n_left >= msl && n_node - n_left >= msl && xi > prev_x) {
          const auto n_l = static_cast<double>(n_left);
          const auto n_r = static_cast<double>(n_node - n_left);
          double gain = sum_left_.squaredNorm() / n_l - base;
          gain += (total_ - sum_left_).squaredNorm() / n_r;
          if (gain > best.gain && gain > min_gain) best = SplitCandidate{f, midpoint(prev_x, xi), gain};
        }
        for (Index j = 0; j < c; ++j) sum_left_(j) += y_(i, j) - mean_(j);
        ++n_left;
        prev_x = xi;
      }
    }
    return best;
  }

  /// Renumbers nodes and leaves in preorder and computes leaf means.
  RegressionTree finish() {
    const Index c = y_.cols();
    std::vector<TreeNode> nodes;
    std::vector<Index> new_id(raw_.size(), -1);
    std::vector<Index> leaf_of_raw(raw_.size(), -1);
    Index n_leaves = 0;
    std::function<Index(Index)> visit = [&](Index r) -> Index {
      const auto& rn = raw_[static_cast<std::size_t>(r)];
      const auto id = static_cast<Index>(nodes.size());
      new_id[static_cast<std::size_t>(r)] = id;
      nodes.push_back(TreeNode{rn.feature, rn.threshold, -1, -1, -1, rn.n_samples});
      if (rn.left < 0) {
        nodes[static_cast<std::size_t>(id)].feature = -1;
        nodes[static_cast<std::size_t>(id)].leaf = n_leaves;
        leaf_of_raw[static_cast<std::size_t>(r)] = n_leaves++;
      } else {
        const Index l = visit(rn.left);
        const Index rr = visit(rn.right);
        nodes[static_cast<std::size_t>(id)].left = l;
        nodes[static_cast<std::size_t>(id)].right = rr;
      }
      return id;
    };
    visit(0);

    Matrix values = Matrix::Zero(n_leaves, c);
    std::vector<Index> counts(static_cast<std::size_t>(n_leaves), 0);
    for (Index i = 0; i < x_.rows(); ++i) {
      const Index leaf = leaf_of_raw[static_cast<std::size_t>(node_of_[static_cast<std::size_t>(i)])];
      values.row(leaf) += y_.row(i);
      ++counts[static_cast<std::size_t>(leaf)];
    }
    for (Index l = 0; l < n_leaves; ++l) values.row(l) /= static_cast<double>(counts[static_cast<std::size_t>(l)]);
    return RegressionTree(std::move(nodes), std::move(values), x_.cols());
  }

  const Matrix& x_;
  RowMatrix y_;
  TreeConfig cfg_;
  const SortedFeatures& sorted_;
  Rng rng_;
  std::vector<RawNode> raw_;
  std::vector<Index> node_of_;
  Vector sum_left_, total_, mean_;
};

}  // namespace detail

inline void validate(const TreeConfig& cfg, Index p) {
  if (cfg.max_leaves < 2) throw ConfigError("max_leaves must be at least 2");
  if (cfg.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be at least 1");
  if (cfg.k_features < 0 || cfg.k_features > p)
    throw ConfigError("k_features must lie in [1, p] (or 0 for all features)");
}

/// Best-first growth: the leaf whose best split removes the most impurity is
/// expanded next, until `max_leaves` or no split helps. Reuses `sorted` when
/// many trees are fitted on the same X.
inline RegressionTree fit_tree(const Matrix& x, const Matrix& targets, const TreeConfig& cfg,
                               const SortedFeatures& sorted) {
  if (x.rows() < 1) throw ShapeError("fit_tree needs at least one sample");
  if (targets.rows() != x.rows())
    throw ShapeError("fit_tree: " + std::to_string(x.rows()) + " feature rows vs " + std::to_string(targets.rows()) +
                     " target rows");
  if (targets.cols() < 1) throw ShapeError("fit_tree needs at least one target column");
  if (sorted.n_features() != x.cols()) throw ShapeError("presorted feature index does not match X");
  validate(cfg, x.cols());
  return detail::TreeGrower(x, targets, cfg, sorted).grow();
}

inline RegressionTree fit_tree(const Matrix& x, const Matrix& targets, const TreeConfig& cfg) {
  return fit_tree(x, targets, cfg, SortedFeatures(x));
}

inline Matrix predict_tree(const RegressionTree& tree, const Matrix& x) { return tree.predict(x); }

/// Keeps the structure and replaces each leaf by the mean of `new_targets`
/// over the rows of x that reach it.
inline RegressionTree relabel_leaves(const RegressionTree& tree, const Matrix& x, const Matrix& new_targets) {
  if (new_targets.rows() != x.rows())
    throw ShapeError("relabel: " + std::to_string(x.rows()) + " feature rows vs " +
                     std::to_string(new_targets.rows()) + " target rows");
  const auto leaves = tree.apply(x);
  Matrix values = Matrix::Zero(tree.n_leaves(), new_targets.cols());
  std::vector<Index> counts(static_cast<std::size_t>(tree.n_leaves()), 0);
  for (Index i = 0; i < x.rows(); ++i) {
    const Index l = leaves[static_cast<std::size_t>(i)];
    values.row(l) += new_targets.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (Index l = 0; l < tree.n_leaves(); ++l) {
    if (counts[static_cast<std::size_t>(l)] == 0)
      throw RelabelError("leaf " + std::to_string(l) + " is reached by no relabelling row");
    values.row(l) /= static_cast<double>(counts[static_cast<std::size_t>(l)]);
  }
  return tree.with_leaves(std::move(values), counts);
}

}  // namespace boostrp

#endif  // BOOSTRP_TREE_HPP
