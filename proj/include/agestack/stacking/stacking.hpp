#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agestack/core/execution.hpp"
#include "agestack/core/types.hpp"
#include "agestack/learners/feature_matrix.hpp"
#include "agestack/learners/model.hpp"

namespace agestack::stacking {

// One row per subject (manifest order), one column per base estimator in
// the declared order.
struct StackingMatrix {
  std::vector<std::string> subject_ids;
  std::vector<std::string> estimator_order;
  learners::FeatureMatrix features;
  std::vector<double> targets;
};

// features[i][j] = point prediction of estimator_order[j] for subject i.
// Throws UnknownEstimator, CoverageMismatch.
StackingMatrix assemble(const core::Manifest& manifest,
                        std::span<const core::Prediction> predictions,
                        const std::vector<std::string>& estimator_order);

class FoldPlan {
 public:
  FoldPlan(std::size_t k, std::vector<std::string> subject_ids, std::vector<std::size_t> fold_of);

  std::size_t k() const noexcept { return k_; }
  const std::vector<std::string>& subject_ids() const noexcept { return subject_ids_; }
  // Fold index of the i-th subject (in the order given to plan_folds).
  std::size_t fold_of(std::size_t i) const { return fold_of_.at(i); }
  std::size_t fold_of(std::string_view subject_id) const;
  std::vector<std::size_t> fold_sizes() const;
  // Subject positions in fold f, ascending.
  std::vector<std::size_t> members(std::size_t f) const;

 private:
  std::size_t k_;
  std::vector<std::string> subject_ids_;
  std::vector<std::size_t> fold_of_;
};

// Seeded Fisher-Yates shuffle of the positions, then round-robin: the p-th
// shuffled subject goes to fold p % k. Throws TooFewSubjects when k > n or
// k < 2.
FoldPlan plan_folds(const std::vector<std::string>& subject_ids, std::size_t k,
                    std::uint64_t seed);

struct OofResult {
  std::vector<std::string> subject_ids;  // matrix order
  std::vector<double> predictions;
  std::vector<std::size_t> fold;  // fold that produced each prediction
};

// For each fold, fit on all other folds and predict the held-out subjects.
// Folds run concurrently under Execution::Parallel; output is always in
// matrix order. Throws DataError when the plan and matrix disagree.
OofResult stack_oof(const StackingMatrix& matrix, const FoldPlan& plan,
                    const learners::LearnerSpec& spec, Execution exec = Execution::Parallel);

// "stack:<learner>:<seed>"
std::string stack_estimator_id(const learners::LearnerSpec& spec, std::uint64_t seed);

std::vector<core::Prediction> to_predictions(const OofResult& oof,
                                             const std::string& estimator_id);

// Numeric feature for a band-valued estimator: the band midpoint.
double ds13k_feature(core::AgeRange band);

}  // namespace agestack::stacking
