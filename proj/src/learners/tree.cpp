#include "agestack/learners/tree.hpp"

#include <algorithm>
#include <string>

#include "agestack/error.hpp"

namespace agestack::learners {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, std::size_t n_features)
    : nodes_(std::move(nodes)), n_features_(n_features) {
  if (nodes_.empty()) throw DimensionMismatch("a tree needs at least one node");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    if (static_cast<std::size_t>(node.feature) >= n_features_ || node.left <= 0 ||
        node.right <= 0 || node.left >= n || node.right >= n) {
      throw DimensionMismatch("malformed tree node");
    }
  }
}

std::size_t RegressionTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [idx, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const auto& node = nodes_[static_cast<std::size_t>(idx)];
    if (!node.is_leaf()) {
      stack.emplace_back(node.left, d + 1);
      stack.emplace_back(node.right, d + 1);
    }
  }
  return best;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t RegressionTree::leaf_index(std::span<const double> row) const {
  std::size_t idx = 0;
  while (!nodes_[idx].is_leaf()) {
    const auto& node = nodes_[idx];
    idx = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold
                                       ? node.left
                                       : node.right);
  }
  return idx;
}

std::vector<double> RegressionTree::predict(const FeatureMatrix& x, Execution exec) const {
  if (x.cols() != n_features_) {
    throw DimensionMismatch("tree expects " + std::to_string(n_features_) + " features, got " +
                            std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows());
  kernels::fill_rows(exec, out, [&](std::size_t i) { return predict_one(x.row(i)); });
  return out;
}

namespace {

class Builder {
 public:
  Builder(const FeatureMatrix& x, std::span<const double> y, const TreeParams& params,
          kernels::SortedColumns cols, Execution exec)
      : x_(x), y_(y), params_(params), cols_(std::move(cols)), exec_(exec) {}

  std::vector<TreeNode> build() {
    grow(0, x_.rows(), 0);
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();

    const auto members = std::span(cols_.order[0]).subspan(begin, end - begin);
    double sum = 0.0;
    double lo = y_[members.front()];
    double hi = lo;
    for (const auto i : members) {
      sum += y_[i];
      lo = std::min(lo, y_[i]);
      hi = std::max(hi, y_[i]);
    }
    {
      auto& node = nodes_.back();
      node.n_samples = end - begin;
      node.value = sum / static_cast<double>(end - begin);
    }

    const bool depth_hit = params_.max_depth && depth >= *params_.max_depth;
    if (depth_hit || lo == hi || end - begin < params_.min_samples_split) return id;

    const auto split = kernels::best_split(exec_, x_, y_, cols_, begin, end);
    if (!split) return id;

    const std::size_t mid = kernels::partition(exec_, x_, cols_, begin, end, *split, scratch_);
    const std::int32_t left = grow(begin, mid, depth + 1);
    const std::int32_t right = grow(mid, end, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  const FeatureMatrix& x_;
  std::span<const double> y_;
  const TreeParams& params_;
  kernels::SortedColumns cols_;
  Execution exec_;
  std::vector<TreeNode> nodes_;
  std::vector<std::uint32_t> scratch_;
};

void check_params(const TreeParams& params) {
  if (params.min_samples_split < 2) {
    throw InvalidHyperparameter("min_samples_split must be at least 2");
  }
}

}  // namespace

RegressionTree fit_tree_presorted(const FeatureMatrix& x, std::span<const double> y,
                                  const TreeParams& params, const kernels::SortedColumns& sorted,
                                  Execution exec) {
  check_targets(x, y);
  check_params(params);
  Builder builder(x, y, params, sorted, exec);
  return RegressionTree(builder.build(), x.cols());
}

RegressionTree fit_tree(const FeatureMatrix& x, std::span<const double> y,
                        const TreeParams& params, Execution exec) {
  check_targets(x, y);
  return fit_tree_presorted(x, y, params, kernels::SortedColumns::build(x), exec);
}

}  // namespace agestack::learners
