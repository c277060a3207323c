#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agestack/core/execution.hpp"
#include "agestack/learners/feature_matrix.hpp"
#include "agestack/learners/kernels.hpp"

namespace agestack::learners {

struct TreeParams {
  std::optional<std::size_t> max_depth = 3;  // nullopt: unlimited
  std::size_t min_samples_split = 2;
};

// Flat node storage; node 0 is the root. A node with feature < 0 is a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // mean training target routed here
  std::size_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Binary regression tree: x[feature] <= threshold goes left.
class RegressionTree {
 public:
  RegressionTree(std::vector<TreeNode> nodes, std::size_t n_features);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  // Index of the leaf reached by `row`.
  std::size_t leaf_index(std::span<const double> row) const;
  double predict_one(std::span<const double> row) const { return nodes_[leaf_index(row)].value; }
  // Throws DimensionMismatch.
  std::vector<double> predict(const FeatureMatrix& x,
                              Execution exec = Execution::Parallel) const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t n_features_;
};

// Greedy CART minimizing the children's summed squared error. Stops at the
// depth limit, on a pure node, or when a node has fewer than
// min_samples_split samples. Deterministic. Throws DimensionMismatch.
RegressionTree fit_tree(const FeatureMatrix& x, std::span<const double> y,
                        const TreeParams& params, Execution exec = Execution::Parallel);

// Same as fit_tree, reusing a presorted view of x (boosting refits many
// trees on one matrix).
RegressionTree fit_tree_presorted(const FeatureMatrix& x, std::span<const double> y,
                                  const TreeParams& params, const kernels::SortedColumns& sorted,
                                  Execution exec = Execution::Parallel);

}  // namespace agestack::learners
