#include "agestack/learners/boosting.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "agestack/error.hpp"

namespace agestack::learners {

GradientBoostingModel::GradientBoostingModel(double init_value, double learning_rate,
                                             std::size_t max_depth,
                                             std::vector<RegressionTree> stages,
                                             std::size_t n_features)
    : init_value_(init_value),
      learning_rate_(learning_rate),
      max_depth_(max_depth),
      stages_(std::move(stages)),
      n_features_(n_features) {
  for (const auto& s : stages_) {
    if (s.n_features() != n_features_) throw DimensionMismatch("stage feature count mismatch");
  }
}

double GradientBoostingModel::predict_one(std::span<const double> row) const {
  double boost = 0.0;
  for (const auto& stage : stages_) boost += stage.predict_one(row);
  return init_value_ + learning_rate_ * boost;
}

std::vector<double> GradientBoostingModel::predict(const FeatureMatrix& x, Execution exec) const {
  if (x.cols() != n_features_) {
    throw DimensionMismatch("model expects " + std::to_string(n_features_) + " features, got " +
                            std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows());
  kernels::fill_rows(exec, out, [&](std::size_t i) { return predict_one(x.row(i)); });
  return out;
}

GradientBoostingModel fit_gbr(const FeatureMatrix& x, std::span<const double> y,
                              const GbrParams& params, Execution exec) {
  check_targets(x, y);
  if (params.n_stages < 1) throw InvalidHyperparameter("n_stages must be at least 1");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw InvalidHyperparameter("learning_rate must lie in (0, 1]");
  }

  const std::size_t n = x.rows();
  const double init = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  const auto sorted = kernels::SortedColumns::build(x);
  const TreeParams tree_params{params.max_depth, params.min_samples_split};

  std::vector<double> fitted(n, init);
  std::vector<double> residual(n);
  std::vector<RegressionTree> stages;
  stages.reserve(params.n_stages);
  for (std::size_t m = 0; m < params.n_stages; ++m) {
    kernels::fill_rows(exec, residual, [&](std::size_t i) { return y[i] - fitted[i]; });
    auto tree = fit_tree_presorted(x, residual, tree_params, sorted, exec);
    kernels::fill_rows(exec, fitted, [&](std::size_t i) {
      return fitted[i] + params.learning_rate * tree.predict_one(x.row(i));
    });
    stages.push_back(std::move(tree));
  }
  return GradientBoostingModel(init, params.learning_rate, params.max_depth, std::move(stages),
                               x.cols());
}

std::vector<double> staged_mse(const GradientBoostingModel& model, const FeatureMatrix& x,
                               std::span<const double> y) {
  check_targets(x, y);
  std::vector<double> boost(x.rows(), 0.0);
  std::vector<double> out;
  const auto mse = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double e = y[i] - (model.init_value() + model.learning_rate() * boost[i]);
      s += e * e;
    }
    return s / static_cast<double>(x.rows());
  };
  out.push_back(mse());
  for (const auto& stage : model.stages()) {
    for (std::size_t i = 0; i < x.rows(); ++i) boost[i] += stage.predict_one(x.row(i));
    out.push_back(mse());
  }
  return out;
}

}  // namespace agestack::learners
