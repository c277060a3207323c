#include "agestack/stacking/stacking.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "agestack/core/prng.hpp"
#include "agestack/error.hpp"

namespace agestack::stacking {

StackingMatrix assemble(const core::Manifest& manifest,
                        std::span<const core::Prediction> predictions,
                        const std::vector<std::string>& estimator_order) {
  if (estimator_order.empty()) throw UsageError("estimator order is empty");
  if (manifest.empty()) throw EmptyInput("manifest has no subjects");

  std::unordered_map<std::string_view, std::size_t> column;
  for (std::size_t j = 0; j < estimator_order.size(); ++j) {
    if (!column.emplace(estimator_order[j], j).second) {
      throw UsageError("estimator '" + estimator_order[j] + "' listed twice");
    }
  }
  std::unordered_map<std::string_view, std::size_t> row;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    row.emplace(manifest.records()[i].subject_id, i);
  }

  const std::size_t n = manifest.size();
  const std::size_t d = estimator_order.size();
  std::vector<double> values(n * d, 0.0);
  std::vector<char> filled(n * d, 0);
  std::vector<char> seen_estimator(d, 0);
  for (const auto& p : predictions) {
    const auto c = column.find(p.estimator_id);
    if (c == column.end()) continue;
    seen_estimator[c->second] = 1;
    const auto r = row.find(p.subject_id);
    if (r == row.end()) continue;
    const std::size_t cell = r->second * d + c->second;
    if (filled[cell]) {
      throw DataError("duplicate prediction for (" + p.subject_id + ", " + p.estimator_id + ")");
    }
    values[cell] = p.point;
    filled[cell] = 1;
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!seen_estimator[j]) throw UnknownEstimator(estimator_order[j]);
    std::size_t missing = 0;
    for (std::size_t i = 0; i < n; ++i) missing += filled[i * d + j] ? 0 : 1;
    if (missing) throw CoverageMismatch(estimator_order[j], missing);
  }

  StackingMatrix m{{}, estimator_order, learners::FeatureMatrix(n, d, std::move(values)), {}};
  m.subject_ids.reserve(n);
  m.targets.reserve(n);
  for (const auto& r : manifest.records()) {
    m.subject_ids.push_back(r.subject_id);
    m.targets.push_back(r.age.value());
  }
  return m;
}

FoldPlan::FoldPlan(std::size_t k, std::vector<std::string> subject_ids,
                   std::vector<std::size_t> fold_of)
    : k_(k), subject_ids_(std::move(subject_ids)), fold_of_(std::move(fold_of)) {
  if (fold_of_.size() != subject_ids_.size()) throw DataError("fold plan size mismatch");
  for (const auto f : fold_of_) {
    if (f >= k_) throw DataError("fold index out of range");
  }
}

std::size_t FoldPlan::fold_of(std::string_view subject_id) const {
  const auto it = std::find(subject_ids_.begin(), subject_ids_.end(), subject_id);
  if (it == subject_ids_.end()) throw DataError("subject not in fold plan");
  return fold_of_[static_cast<std::size_t>(it - subject_ids_.begin())];
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (const auto f : fold_of_) ++sizes[f];
  return sizes;
}

std::vector<std::size_t> FoldPlan::members(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of_.size(); ++i) {
    if (fold_of_[i] == f) out.push_back(i);
  }
  return out;
}

FoldPlan plan_folds(const std::vector<std::string>& subject_ids, std::size_t k,
                    std::uint64_t seed) {
  const std::size_t n = subject_ids.size();
  if (k < 2 || k > n) throw TooFewSubjects(n, k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  core::SplitMix64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> fold_of(n);
  for (std::size_t p = 0; p < n; ++p) fold_of[order[p]] = p % k;
  return FoldPlan(k, subject_ids, std::move(fold_of));
}

OofResult stack_oof(const StackingMatrix& matrix, const FoldPlan& plan,
                    const learners::LearnerSpec& spec, Execution exec) {
  const std::size_t n = matrix.subject_ids.size();
  if (plan.subject_ids() != matrix.subject_ids) {
    throw DataError("fold plan does not cover exactly the matrix subjects");
  }
  const std::size_t k = plan.k();

  OofResult out;
  out.subject_ids = matrix.subject_ids;
  out.predictions.assign(n, 0.0);
  out.fold.assign(n, 0);

  // Nested regions inside the learners fall back to serial when folds
  // already occupy the threads.
  const auto run_fold = [&](std::size_t f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < n; ++i) (plan.fold_of(i) == f ? test : train).push_back(i);
    if (test.empty()) return;
    if (train.empty()) throw TooFewSubjects(n, k);
    std::vector<double> y(train.size());
    for (std::size_t t = 0; t < train.size(); ++t) y[t] = matrix.targets[train[t]];
    const auto model = learners::fit(spec, matrix.features.select_rows(train), y, exec);
    const auto pred = learners::predict(model, matrix.features.select_rows(test), exec);
    for (std::size_t t = 0; t < test.size(); ++t) {
      out.predictions[test[t]] = pred[t];
      out.fold[test[t]] = f;
    }
  };

  if (exec == Execution::Parallel) {
    std::vector<std::exception_ptr> errors(k);
    const auto kk = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t f = 0; f < kk; ++f) {
      try {
        run_fold(static_cast<std::size_t>(f));
      } catch (...) {
        errors[static_cast<std::size_t>(f)] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t f = 0; f < k; ++f) run_fold(f);
  }
  return out;
}

std::string stack_estimator_id(const learners::LearnerSpec& spec, std::uint64_t seed) {
  return "stack:" + learners::learner_name(spec) + ":" + std::to_string(seed);
}

std::vector<core::Prediction> to_predictions(const OofResult& oof,
                                             const std::string& estimator_id) {
  std::vector<core::Prediction> out;
  out.reserve(oof.subject_ids.size());
  for (std::size_t i = 0; i < oof.subject_ids.size(); ++i) {
    core::Prediction p;
    p.subject_id = oof.subject_ids[i];
    p.estimator_id = estimator_id;
    p.point = std::max(0.0, oof.predictions[i]);
    out.push_back(std::move(p));
  }
  return out;
}

double ds13k_feature(core::AgeRange band) {
  const auto b = core::bounds_of(band);
  return (b.low + b.high) / 2.0;
}

}  // namespace agestack::stacking
