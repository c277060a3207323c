#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "agestack/core/types.hpp"
#include "agestack/report/svg.hpp"

namespace agestack::report {

// Mean prediction per true age for each estimator, plus an "actual" identity
// series as the last entry.
std::vector<LineSeries> mean_prediction_curves(const core::Manifest& manifest,
                                               std::span<const core::Prediction> predictions,
                                               const std::vector<std::string>& estimator_ids);

std::vector<LineSeries> mae_per_age_curves(const core::Manifest& manifest,
                                           std::span<const core::Prediction> predictions,
                                           const std::vector<std::string>& estimator_ids);

// One group per band, one value per estimator (0 for absent bands).
std::vector<BarGroup> band_accuracy_groups(const core::Manifest& manifest,
                                           std::span<const core::Prediction> predictions,
                                           const std::vector<std::string>& estimator_ids);

struct FigurePaths {
  std::filesystem::path csv;
  std::filesystem::path svg;
};

// Writes fig1_mean_prediction, fig2_mae_per_age and fig4_band_accuracy as
// CSV + SVG into out_dir.
std::vector<FigurePaths> write_figures(const core::Manifest& manifest,
                                       std::span<const core::Prediction> predictions,
                                       const std::vector<std::string>& estimator_ids,
                                       const std::filesystem::path& out_dir,
                                       std::string_view comment = {});

}  // namespace agestack::report
