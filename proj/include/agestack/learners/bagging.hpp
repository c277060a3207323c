#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agestack/core/execution.hpp"
#include "agestack/learners/tree.hpp"

namespace agestack::learners {

enum class Sampling {
  Bootstrap,  // n draws with replacement
  Identity,   // every member sees the training set as-is (test hook)
};

struct BaggingParams {
  std::size_t n_members = 10;
  std::optional<std::size_t> max_depth;  // unlimited by default
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
  Sampling sampling = Sampling::Bootstrap;
};

// prediction(x) = mean over members.
class BaggingModel {
 public:
  BaggingModel(std::vector<RegressionTree> members, std::uint64_t seed, std::size_t n_features);

  const std::vector<RegressionTree>& members() const noexcept { return members_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t n_features() const noexcept { return n_features_; }

  double predict_one(std::span<const double> row) const;
  std::vector<double> predict(const FeatureMatrix& x,
                              Execution exec = Execution::Parallel) const;

  friend bool operator==(const BaggingModel&, const BaggingModel&) = default;

 private:
  std::vector<RegressionTree> members_;
  std::uint64_t seed_;
  std::size_t n_features_;
};

// Bootstrap indices for member `member` of a seeded ensemble: n draws with
// replacement from SplitMix64(derive_seed(seed, member)).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed, std::size_t member);

// Members are fit in parallel under Execution::Parallel; each has its own
// bootstrap stream so the result does not depend on scheduling.
BaggingModel fit_bagging(const FeatureMatrix& x, std::span<const double> y,
                         const BaggingParams& params, Execution exec = Execution::Parallel);

}  // namespace agestack::learners
