#include "agestack/estimators/replay.hpp"

#include "agestack/core/manifest.hpp"
#include "agestack/error.hpp"

namespace agestack::estimators {

ReplayAdapter::ReplayAdapter(std::span<const core::Prediction> recorded, std::string estimator_id)
    : id_(std::move(estimator_id)) {
  for (const auto& p : recorded) {
    if (p.estimator_id != id_) continue;
    if (p.low && p.high) has_range_ = true;
    if (!by_subject_.emplace(p.subject_id, p).second) {
      throw DataError("duplicate recorded prediction for '" + p.subject_id + "'");
    }
  }
  if (by_subject_.empty()) throw UnknownEstimator(id_);
}

ReplayAdapter ReplayAdapter::from_csv(const std::filesystem::path& predictions_csv,
                                      std::string estimator_id) {
  const auto rows = core::read_predictions(predictions_csv);
  return ReplayAdapter(rows, std::move(estimator_id));
}

Capabilities ReplayAdapter::capabilities() const {
  return Capabilities{has_range_, false, true, true};
}

core::Prediction ReplayAdapter::predict(const core::SubjectRecord& subject) {
  const auto it = by_subject_.find(subject.subject_id);
  if (it == by_subject_.end()) throw MissingSubject(id_, subject.subject_id);
  return it->second;
}

}  // namespace agestack::estimators
