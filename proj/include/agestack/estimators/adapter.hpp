#pragma once

#include <string>

#include "agestack/core/types.hpp"

namespace agestack::estimators {

struct Capabilities {
  bool returns_range = false;
  bool returns_bands = false;
  // When false, harvest serializes calls to this adapter.
  bool thread_safe = true;
  // Replay and simulator adapters return the same value for the same subject.
  bool deterministic = true;
};

// A base estimator producing one point age per subject.
class EstimatorAdapter {
 public:
  virtual ~EstimatorAdapter() = default;
  virtual const std::string& estimator_id() const = 0;
  virtual Capabilities capabilities() const = 0;
  // Throws an agestack::Error subclass on failure.
  virtual core::Prediction predict(const core::SubjectRecord& subject) = 0;
};

}  // namespace agestack::estimators
