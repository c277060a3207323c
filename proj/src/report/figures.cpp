#include "agestack/report/figures.hpp"

#include <fstream>
#include <sstream>

#include "agestack/core/csv.hpp"
#include "agestack/error.hpp"
#include "agestack/metrics/metrics.hpp"

namespace agestack::report {

namespace {

std::vector<LineSeries> curves(const core::Manifest& manifest,
                               std::span<const core::Prediction> predictions,
                               const std::vector<std::string>& estimator_ids, bool mae) {
  std::vector<LineSeries> out;
  for (const auto& id : estimator_ids) {
    const auto samples = metrics::pair_with_labels(manifest, predictions, id);
    const auto curve = mae ? metrics::mae_per_age(samples) : metrics::mean_prediction_per_age(samples);
    LineSeries s{id, {}, false};
    for (const auto& [age, v] : curve) s.points.emplace_back(age.value(), v);
    out.push_back(std::move(s));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::string series_csv(const std::vector<LineSeries>& series, std::string_view value_name,
                       std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "age,estimator_id," << value_name << '\n';
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      core::csv::write_row(out, {std::to_string(static_cast<int>(x)), s.name,
                                 core::csv::format_decimal(y)});
    }
  }
  return out.str();
}

}  // namespace

std::vector<LineSeries> mean_prediction_curves(const core::Manifest& manifest,
                                               std::span<const core::Prediction> predictions,
                                               const std::vector<std::string>& estimator_ids) {
  auto out = curves(manifest, predictions, estimator_ids, false);
  LineSeries actual{"actual", {}, true};
  for (int a = manifest.declared_age_min().value(); a <= manifest.declared_age_max().value(); ++a) {
    actual.points.emplace_back(a, a);
  }
  out.push_back(std::move(actual));
  return out;
}

std::vector<LineSeries> mae_per_age_curves(const core::Manifest& manifest,
                                           std::span<const core::Prediction> predictions,
                                           const std::vector<std::string>& estimator_ids) {
  return curves(manifest, predictions, estimator_ids, true);
}

std::vector<BarGroup> band_accuracy_groups(const core::Manifest& manifest,
                                           std::span<const core::Prediction> predictions,
                                           const std::vector<std::string>& estimator_ids) {
  std::vector<metrics::BandAccuracyTable> tables;
  for (const auto& id : estimator_ids) {
    tables.push_back(metrics::band_accuracy(metrics::pair_with_labels(manifest, predictions, id)));
  }
  std::vector<BarGroup> groups;
  for (const auto band : core::kAllBands) {
    BarGroup g{std::string(core::band_label(band)), {}};
    for (const auto& t : tables) {
      const auto it = t.per_band.find(band);
      g.values.push_back(it == t.per_band.end() ? 0.0 : it->second);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<FigurePaths> write_figures(const core::Manifest& manifest,
                                       std::span<const core::Prediction> predictions,
                                       const std::vector<std::string>& estimator_ids,
                                       const std::filesystem::path& out_dir,
                                       std::string_view comment) {
  std::filesystem::create_directories(out_dir);
  std::vector<FigurePaths> paths;
  const std::string c(comment);

  {
    const auto series = mean_prediction_curves(manifest, predictions, estimator_ids);
    FigurePaths p{out_dir / "fig1_mean_prediction.csv", out_dir / "fig1_mean_prediction.svg"};
    write_file(p.csv, series_csv(series, "mean_prediction", comment));
    write_file(p.svg, line_chart_svg({"Average estimated age vs actual age", "Actual age",
                                      "Average estimated age", c},
                                     series));
    paths.push_back(p);
  }
  {
    const auto series = mae_per_age_curves(manifest, predictions, estimator_ids);
    FigurePaths p{out_dir / "fig2_mae_per_age.csv", out_dir / "fig2_mae_per_age.svg"};
    write_file(p.csv, series_csv(series, "mae", comment));
    write_file(p.svg,
               line_chart_svg({"Mean absolute error per age", "Actual age", "MAE (years)", c},
                              series));
    paths.push_back(p);
  }
  {
    const auto groups = band_accuracy_groups(manifest, predictions, estimator_ids);
    FigurePaths p{out_dir / "fig4_band_accuracy.csv", out_dir / "fig4_band_accuracy.svg"};
    std::ostringstream csv;
    if (!comment.empty()) csv << "# " << comment << '\n';
    csv << "band,estimator_id,accuracy\n";
    for (const auto& g : groups) {
      for (std::size_t i = 0; i < estimator_ids.size(); ++i) {
        core::csv::write_row(csv, {g.category, estimator_ids[i],
                                   core::csv::format_decimal(g.values[i])});
      }
    }
    write_file(p.csv, csv.str());
    write_file(p.svg, bar_chart_svg({"Accuracy per age band", "Age band", "Accuracy", c},
                                    estimator_ids, groups, 1.0));
    paths.push_back(p);
  }
  return paths;
}

}  // namespace agestack::report
