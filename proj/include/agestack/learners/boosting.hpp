#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "agestack/core/execution.hpp"
#include "agestack/learners/tree.hpp"

namespace agestack::learners {

struct GbrParams {
  std::size_t n_stages = 100;
  double learning_rate = 0.1;
  std::size_t max_depth = 3;
  std::size_t min_samples_split = 2;
};

// prediction(x) = init_value + learning_rate * sum_m stage_m(x)
class GradientBoostingModel {
 public:
  GradientBoostingModel(double init_value, double learning_rate, std::size_t max_depth,
                        std::vector<RegressionTree> stages, std::size_t n_features);

  double init_value() const noexcept { return init_value_; }
  double learning_rate() const noexcept { return learning_rate_; }
  std::size_t max_depth() const noexcept { return max_depth_; }
  std::size_t n_features() const noexcept { return n_features_; }
  const std::vector<RegressionTree>& stages() const noexcept { return stages_; }

  double predict_one(std::span<const double> row) const;
  std::vector<double> predict(const FeatureMatrix& x,
                              Execution exec = Execution::Parallel) const;

  friend bool operator==(const GradientBoostingModel&, const GradientBoostingModel&) = default;

 private:
  double init_value_;
  double learning_rate_;
  std::size_t max_depth_;
  std::vector<RegressionTree> stages_;
  std::size_t n_features_;
};

// Squared-loss stagewise boosting starting from mean(y). Throws
// DimensionMismatch, InvalidHyperparameter.
GradientBoostingModel fit_gbr(const FeatureMatrix& x, std::span<const double> y,
                              const GbrParams& params, Execution exec = Execution::Parallel);

// Training MSE after 0, 1, ..., M stages (M + 1 entries).
std::vector<double> staged_mse(const GradientBoostingModel& model, const FeatureMatrix& x,
                               std::span<const double> y);

}  // namespace agestack::learners
