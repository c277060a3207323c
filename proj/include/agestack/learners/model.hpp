#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "agestack/core/execution.hpp"
#include "agestack/learners/bagging.hpp"
#include "agestack/learners/boosting.hpp"
#include "agestack/learners/logistic.hpp"
#include "agestack/learners/tree.hpp"

namespace agestack::learners {

// Baseline that predicts the training-target mean.
struct MeanParams {};

class ConstantModel {
 public:
  ConstantModel(double value, std::size_t n_features) : value_(value), n_features_(n_features) {}
  double value() const noexcept { return value_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::vector<double> predict(const FeatureMatrix& x) const;
  friend bool operator==(const ConstantModel&, const ConstantModel&) = default;

 private:
  double value_;
  std::size_t n_features_;
};

using LearnerSpec = std::variant<TreeParams, GbrParams, BaggingParams, LogisticParams, MeanParams>;
using Model =
    std::variant<RegressionTree, GradientBoostingModel, BaggingModel, LogisticModel, ConstantModel>;

// "tree", "gbr", "bagging", "logistic", "mean"
std::string learner_name(const LearnerSpec& spec);

Model fit(const LearnerSpec& spec, const FeatureMatrix& x, std::span<const double> y,
          Execution exec = Execution::Parallel);
// Throws DimensionMismatch.
std::vector<double> predict(const Model& model, const FeatureMatrix& x,
                            Execution exec = Execution::Parallel);

// Versioned JSON document:
//   {"format": "agestack-model", "version": 1, "kind": "...", ...}
// Trees are nested {"feature", "threshold", "n_samples", "value", "left", "right"}
// objects; reals use shortest round-trip decimal.
inline constexpr int kModelFormatVersion = 1;
nlohmann::json to_json(const Model& model);
// Throws SchemaError-style DataError on malformed documents.
Model model_from_json(const nlohmann::json& doc);

nlohmann::json spec_to_json(const LearnerSpec& spec);

}  // namespace agestack::learners
