#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agestack/core/types.hpp"

namespace agestack::metrics {

using core::AgeRange;
using core::AgeYears;

struct PairedSample {
  std::string subject_id;
  double predicted = 0.0;
  AgeYears real;
};

// Mean absolute error, (1/n) * sum |predicted_i - real_i|. Throws EmptyInput.
double mae(std::span<const PairedSample> samples);

// MAE grouped by true age. Keys are exactly the ages present.
std::map<AgeYears, double> mae_per_age(std::span<const PairedSample> samples);

// Mean prediction grouped by true age (the "average estimated age" curve).
std::map<AgeYears, double> mean_prediction_per_age(std::span<const PairedSample> samples);

// Real-valued prediction -> band: round half up, clamp to [0, 25], band_of.
AgeRange predicted_band(double predicted);

struct BandAccuracyTable {
  // Absent entries mean no sample had a true age in that band.
  std::map<AgeRange, double> per_band;
  // Unweighted mean over the present bands.
  double average = 0.0;
  std::map<AgeRange, std::size_t> support;
};

// Throws EmptyInput, OutOfRange (true age above 25).
BandAccuracyTable band_accuracy(std::span<const PairedSample> samples);

struct ServiceScore {
  std::string estimator_id;
  double mae = 0.0;
};

// Ascending MAE, ties by estimator_id. Every estimator must cover the same
// subject set as the union over all estimators; throws CoverageMismatch.
std::vector<ServiceScore> compare_services(
    const std::map<std::string, std::vector<PairedSample>>& predictions_by_estimator);

// Joins predictions with manifest labels for one estimator, in manifest
// order. Throws CoverageMismatch when a manifest subject has no prediction
// and UnknownEstimator when the estimator has no rows at all.
std::vector<PairedSample> pair_with_labels(const core::Manifest& manifest,
                                           std::span<const core::Prediction> predictions,
                                           const std::string& estimator_id);

}  // namespace agestack::metrics
