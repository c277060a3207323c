#include "agestack/learners/bagging.hpp"

#include <string>

#include "agestack/core/prng.hpp"
#include "agestack/error.hpp"

namespace agestack::learners {

BaggingModel::BaggingModel(std::vector<RegressionTree> members, std::uint64_t seed,
                           std::size_t n_features)
    : members_(std::move(members)), seed_(seed), n_features_(n_features) {
  if (members_.empty()) throw InvalidHyperparameter("bagging needs at least one member");
  for (const auto& m : members_) {
    if (m.n_features() != n_features_) throw DimensionMismatch("member feature count mismatch");
  }
}

double BaggingModel::predict_one(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& m : members_) sum += m.predict_one(row);
  return sum / static_cast<double>(members_.size());
}

std::vector<double> BaggingModel::predict(const FeatureMatrix& x, Execution exec) const {
  if (x.cols() != n_features_) {
    throw DimensionMismatch("model expects " + std::to_string(n_features_) + " features, got " +
                            std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows());
  kernels::fill_rows(exec, out, [&](std::size_t i) { return predict_one(x.row(i)); });
  return out;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed,
                                           std::size_t member) {
  core::SplitMix64 rng(core::derive_seed(seed, member));
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
  return idx;
}

BaggingModel fit_bagging(const FeatureMatrix& x, std::span<const double> y,
                         const BaggingParams& params, Execution exec) {
  check_targets(x, y);
  if (params.n_members < 1) throw InvalidHyperparameter("n_members must be at least 1");
  if (params.min_samples_split < 2) {
    throw InvalidHyperparameter("min_samples_split must be at least 2");
  }
  const TreeParams tree_params{params.max_depth, params.min_samples_split};

  const auto fit_member = [&](std::size_t m) {
    if (params.sampling == Sampling::Identity) {
      return fit_tree(x, y, tree_params, Execution::Serial);
    }
    const auto idx = bootstrap_indices(x.rows(), params.seed, m);
    std::vector<double> yb(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) yb[i] = y[idx[i]];
    return fit_tree(x.select_rows(idx), yb, tree_params, Execution::Serial);
  };

  std::vector<std::optional<RegressionTree>> slots(params.n_members);
  const auto b = static_cast<std::ptrdiff_t>(params.n_members);
  if (exec == Execution::Parallel) {
    // Exceptions cannot cross the OpenMP region; inputs are validated above.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t m = 0; m < b; ++m) slots[m].emplace(fit_member(static_cast<std::size_t>(m)));
  } else {
    for (std::ptrdiff_t m = 0; m < b; ++m) slots[m].emplace(fit_member(static_cast<std::size_t>(m)));
  }

  std::vector<RegressionTree> members;
  members.reserve(slots.size());
  for (auto& s : slots) members.push_back(std::move(*s));
  return BaggingModel(std::move(members), params.seed, x.cols());
}

}  // namespace agestack::learners
