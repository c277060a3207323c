#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "agestack/learners/feature_matrix.hpp"

namespace agestack::learners {

struct LogisticParams {
  std::size_t epochs = 300;
  double step = 0.5;
  double l2_lambda = 1.0;
  // Class labels (ages). Empty: the distinct training targets.
  std::vector<int> classes;
};

// Per-column standardization; zero-variance columns map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const FeatureMatrix& x);
  FeatureMatrix apply(const FeatureMatrix& x) const;
  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

// Multinomial softmax regression objective over standardized features.
// Parameters are packed as [W (K x d, row-major), b (K)]:
//   loss = mean_i(logsumexp(z_i) - z_i[y_i]) + lambda / (2n) * ||W||^2
// with z_i = W x_i + b. Biases are not penalized.
class SoftmaxObjective {
 public:
  SoftmaxObjective(const FeatureMatrix& x, std::vector<std::size_t> target_class,
                   std::size_t n_classes, double l2_lambda);

  std::size_t n_params() const noexcept { return n_classes_ * (x_.cols() + 1); }
  double loss(std::span<const double> params) const;
  // Returns the loss and writes the gradient.
  double loss_and_gradient(std::span<const double> params, std::span<double> grad) const;

 private:
  const FeatureMatrix& x_;
  std::vector<std::size_t> target_;
  std::size_t n_classes_;
  double l2_lambda_;
};

// Numerically stable softmax of `logits` in place.
void softmax(std::span<double> logits);

class LogisticModel {
 public:
  LogisticModel(std::vector<int> classes, std::vector<double> weights, std::vector<double> biases,
                Standardizer standardizer, double l2_lambda);

  const std::vector<int>& classes() const noexcept { return classes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& biases() const noexcept { return biases_; }
  const Standardizer& standardizer() const noexcept { return standardizer_; }
  double l2_lambda() const noexcept { return l2_lambda_; }
  std::size_t n_features() const noexcept { return standardizer_.mean.size(); }

  std::vector<double> probabilities(std::span<const double> row) const;
  // Arg-max class; ties go to the lowest age.
  int predict_class(std::span<const double> row) const;
  std::vector<double> predict(const FeatureMatrix& x) const;

  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;

 private:
  std::vector<int> classes_;
  std::vector<double> weights_;  // K x d
  std::vector<double> biases_;
  Standardizer standardizer_;
  double l2_lambda_;
};

// Full-batch gradient descent from zero weights for a fixed epoch budget.
// Targets are rounded to the nearest integer age. Throws DimensionMismatch,
// InvalidHyperparameter, NonFiniteLoss.
LogisticModel fit_logistic(const FeatureMatrix& x, std::span<const double> y,
                           const LogisticParams& params);

}  // namespace agestack::learners
