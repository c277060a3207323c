#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "agestack/core/types.hpp"
#include "agestack/estimators/adapter.hpp"

namespace agestack::estimators {

struct HarvestFailure {
  std::string subject_id;
  std::string estimator_id;
  std::string kind;  // error class name, e.g. "NoFaceDetected"
  std::string message;
};

struct HarvestResult {
  std::vector<core::Prediction> predictions;  // sorted by (subject_id, estimator_id)
  std::vector<HarvestFailure> failures;       // same order
};

// Queries every adapter for every subject with at most `concurrency_limit`
// calls in flight. Adapters that are not thread-safe see one call at a
// time. Per-subject errors are collected, never rethrown.
HarvestResult harvest(const core::Manifest& manifest,
                      const std::vector<std::shared_ptr<EstimatorAdapter>>& adapters,
                      std::size_t concurrency_limit);

// Writes predictions to `out_path` and failures to
// `<out_path stem>.errors.csv` (subject_id,estimator_id,error,message).
// Returns the sidecar path.
std::filesystem::path write_harvest(const HarvestResult& result,
                                    const std::filesystem::path& out_path,
                                    std::string_view comment = {});

// Short class name for an error, used in failure reports.
std::string error_kind(const std::exception& e);

}  // namespace agestack::estimators
