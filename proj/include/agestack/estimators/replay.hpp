#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>

#include "agestack/estimators/adapter.hpp"

namespace agestack::estimators {

// Serves recorded predictions verbatim.
class ReplayAdapter final : public EstimatorAdapter {
 public:
  // Keeps the rows whose estimator_id matches. Throws UnknownEstimator when
  // there are none.
  ReplayAdapter(std::span<const core::Prediction> recorded, std::string estimator_id);
  static ReplayAdapter from_csv(const std::filesystem::path& predictions_csv,
                                std::string estimator_id);

  const std::string& estimator_id() const override { return id_; }
  Capabilities capabilities() const override;
  // Throws MissingSubject.
  core::Prediction predict(const core::SubjectRecord& subject) override;

 private:
  std::string id_;
  std::unordered_map<std::string, core::Prediction> by_subject_;
  bool has_range_ = false;
};

}  // namespace agestack::estimators
