#include "agestack/learners/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "agestack/error.hpp"

namespace agestack::learners {

Standardizer Standardizer::fit(const FeatureMatrix& x) {
  Standardizer s;
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += x(r, c);
  }
  for (auto& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double e = x(r, c) - s.mean[c];
      s.scale[c] += e * e;
    }
  }
  for (auto& v : s.scale) v = std::sqrt(v / static_cast<double>(n));
  return s;
}

FeatureMatrix Standardizer::apply(const FeatureMatrix& x) const {
  if (x.cols() != mean.size()) throw DimensionMismatch("standardizer column count mismatch");
  std::vector<double> out(x.rows() * x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      out[r * x.cols() + c] = scale[c] > 0.0 ? (x(r, c) - mean[c]) / scale[c] : 0.0;
    }
  }
  return FeatureMatrix(x.rows(), x.cols(), std::move(out));
}

void softmax(std::span<double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (auto& z : logits) {
    z = std::exp(z - top);
    sum += z;
  }
  for (auto& z : logits) z /= sum;
}

SoftmaxObjective::SoftmaxObjective(const FeatureMatrix& x, std::vector<std::size_t> target_class,
                                   std::size_t n_classes, double l2_lambda)
    : x_(x), target_(std::move(target_class)), n_classes_(n_classes), l2_lambda_(l2_lambda) {
  if (target_.size() != x_.rows()) throw DimensionMismatch("target count mismatch");
  for (const auto t : target_) {
    if (t >= n_classes_) throw DimensionMismatch("target class index out of range");
  }
}

double SoftmaxObjective::loss(std::span<const double> params) const {
  std::vector<double> scratch(n_params());
  return loss_and_gradient(params, scratch);
}

double SoftmaxObjective::loss_and_gradient(std::span<const double> params,
                                           std::span<double> grad) const {
  const std::size_t n = x_.rows();
  const std::size_t d = x_.cols();
  const std::size_t k = n_classes_;
  if (params.size() != n_params() || grad.size() != n_params()) {
    throw DimensionMismatch("parameter vector has the wrong length");
  }
  const auto weights = params.subspan(0, k * d);
  const auto biases = params.subspan(k * d, k);
  std::fill(grad.begin(), grad.end(), 0.0);

  std::vector<double> z(k);
  double data_loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x_.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      double acc = biases[c];
      for (std::size_t j = 0; j < d; ++j) acc += weights[c * d + j] * row[j];
      z[c] = acc;
    }
    const double top = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (const double v : z) sum += std::exp(v - top);
    data_loss += top + std::log(sum) - z[target_[i]];
    for (std::size_t c = 0; c < k; ++c) {
      const double residual = std::exp(z[c] - top) / sum - (c == target_[i] ? 1.0 : 0.0);
      for (std::size_t j = 0; j < d; ++j) grad[c * d + j] += residual * row[j];
      grad[k * d + c] += residual;
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  double penalty = 0.0;
  for (std::size_t p = 0; p < k * d; ++p) {
    penalty += weights[p] * weights[p];
    grad[p] = grad[p] * inv_n + l2_lambda_ * inv_n * weights[p];
  }
  for (std::size_t c = 0; c < k; ++c) grad[k * d + c] *= inv_n;
  return data_loss * inv_n + 0.5 * l2_lambda_ * inv_n * penalty;
}

LogisticModel::LogisticModel(std::vector<int> classes, std::vector<double> weights,
                             std::vector<double> biases, Standardizer standardizer,
                             double l2_lambda)
    : classes_(std::move(classes)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      standardizer_(std::move(standardizer)),
      l2_lambda_(l2_lambda) {
  const std::size_t d = standardizer_.mean.size();
  if (classes_.empty() || biases_.size() != classes_.size() ||
      weights_.size() != classes_.size() * d || standardizer_.scale.size() != d) {
    throw DimensionMismatch("inconsistent logistic model shape");
  }
}

std::vector<double> LogisticModel::probabilities(std::span<const double> row) const {
  const std::size_t d = n_features();
  if (row.size() != d) throw DimensionMismatch("logistic model feature count mismatch");
  std::vector<double> z(classes_.size());
  for (std::size_t c = 0; c < z.size(); ++c) {
    double acc = biases_[c];
    for (std::size_t j = 0; j < d; ++j) {
      const double s = standardizer_.scale[j];
      const double v = s > 0.0 ? (row[j] - standardizer_.mean[j]) / s : 0.0;
      acc += weights_[c * d + j] * v;
    }
    z[c] = acc;
  }
  softmax(z);
  return z;
}

int LogisticModel::predict_class(std::span<const double> row) const {
  const auto p = probabilities(row);
  // max_element returns the first maximum; classes are ascending.
  return classes_[static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin())];
}

std::vector<double> LogisticModel::predict(const FeatureMatrix& x) const {
  if (x.cols() != n_features()) throw DimensionMismatch("logistic model feature count mismatch");
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_class(x.row(i));
  return out;
}

LogisticModel fit_logistic(const FeatureMatrix& x, std::span<const double> y,
                           const LogisticParams& params) {
  check_targets(x, y);
  if (!(params.step > 0.0)) throw InvalidHyperparameter("step must be positive");
  if (params.l2_lambda < 0.0) throw InvalidHyperparameter("l2_lambda must be non-negative");

  std::vector<int> labels(y.size());
  std::transform(y.begin(), y.end(), labels.begin(),
                 [](double v) { return static_cast<int>(std::floor(v + 0.5)); });

  std::vector<int> classes = params.classes;
  if (classes.empty()) classes = labels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  std::vector<std::size_t> target(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end() || *it != labels[i]) {
      throw InvalidHyperparameter("target " + std::to_string(labels[i]) +
                                  " is not in the class list");
    }
    target[i] = static_cast<std::size_t>(it - classes.begin());
  }

  auto standardizer = Standardizer::fit(x);
  const FeatureMatrix xs = standardizer.apply(x);
  const SoftmaxObjective objective(xs, std::move(target), classes.size(), params.l2_lambda);

  std::vector<double> theta(objective.n_params(), 0.0);
  std::vector<double> grad(objective.n_params());
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    const double loss = objective.loss_and_gradient(theta, grad);
    if (!std::isfinite(loss)) throw NonFiniteLoss(epoch);
    for (std::size_t p = 0; p < theta.size(); ++p) theta[p] -= params.step * grad[p];
  }
  if (!std::isfinite(objective.loss(theta))) throw NonFiniteLoss(params.epochs);

  const std::size_t kd = classes.size() * x.cols();
  std::vector<double> weights(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(kd));
  std::vector<double> biases(theta.begin() + static_cast<std::ptrdiff_t>(kd), theta.end());
  return LogisticModel(std::move(classes), std::move(weights), std::move(biases),
                       std::move(standardizer), params.l2_lambda);
}

}  // namespace agestack::learners
