#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "agestack/core/types.hpp"
#include "agestack/metrics/metrics.hpp"

namespace agestack::report {

struct EvaluationRow {
  std::string estimator_id;
  std::size_t n = 0;
  double mae = 0.0;
  metrics::BandAccuracyTable bands;
};

// Scores every estimator (all ids present in `predictions` when
// `estimator_ids` is empty) on the manifest subjects. Rows are ranked by
// MAE, ties by id. Throws CoverageMismatch when an estimator does not cover
// the manifest.
std::vector<EvaluationRow> evaluate(const core::Manifest& manifest,
                                    std::span<const core::Prediction> predictions,
                                    std::vector<std::string> estimator_ids = {});

// estimator_id,n,mae,acc_0_5,acc_6_10,acc_11_15,acc_16_17,acc_18_25,acc_avg
void write_metrics_csv(const std::vector<EvaluationRow>& rows, std::ostream& out,
                       std::string_view comment = {});

// Two-column "Method | MAE" table, rows in ranked order.
std::string mae_table(const std::vector<EvaluationRow>& rows, std::string_view title);

// Bands as rows, estimators as columns, plus an AVG row. The best value in
// each row is marked with '*'.
std::string band_table(const std::vector<EvaluationRow>& rows, std::string_view title);

// Per-age MAE table (ages as rows).
std::string mae_per_age_table(const core::Manifest& manifest,
                              std::span<const core::Prediction> predictions,
                              const std::vector<std::string>& estimator_ids,
                              std::string_view title);

}  // namespace agestack::report
