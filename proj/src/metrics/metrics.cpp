#include "agestack/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "agestack/error.hpp"

namespace agestack::metrics {

double mae(std::span<const PairedSample> samples) {
  if (samples.empty()) throw EmptyInput("mae of an empty sample list");
  double total = 0.0;
  for (const auto& s : samples) total += std::abs(s.predicted - s.real.value());
  return total / static_cast<double>(samples.size());
}

namespace {

template <typename F>
std::map<AgeYears, double> grouped_mean(std::span<const PairedSample> samples, F value) {
  if (samples.empty()) throw EmptyInput("grouping an empty sample list");
  std::map<AgeYears, std::pair<double, std::size_t>> acc;
  for (const auto& s : samples) {
    auto& [sum, n] = acc[s.real];
    sum += value(s);
    ++n;
  }
  std::map<AgeYears, double> out;
  for (const auto& [age, sn] : acc) out.emplace(age, sn.first / static_cast<double>(sn.second));
  return out;
}

}  // namespace

std::map<AgeYears, double> mae_per_age(std::span<const PairedSample> samples) {
  return grouped_mean(samples,
                      [](const PairedSample& s) { return std::abs(s.predicted - s.real.value()); });
}

std::map<AgeYears, double> mean_prediction_per_age(std::span<const PairedSample> samples) {
  return grouped_mean(samples, [](const PairedSample& s) { return s.predicted; });
}

AgeRange predicted_band(double predicted) {
  double rounded = std::floor(predicted + 0.5);
  rounded = std::clamp(rounded, 0.0, static_cast<double>(core::kMaxBandAge));
  return core::band_of(static_cast<int>(rounded));
}

BandAccuracyTable band_accuracy(std::span<const PairedSample> samples) {
  if (samples.empty()) throw EmptyInput("band accuracy of an empty sample list");
  std::map<AgeRange, std::size_t> hits;
  BandAccuracyTable table;
  for (const auto& s : samples) {
    const AgeRange truth = core::band_of(s.real);
    ++table.support[truth];
    if (predicted_band(s.predicted) == truth) ++hits[truth];
  }
  double sum = 0.0;
  for (const auto& [band, n] : table.support) {
    const double acc = static_cast<double>(hits[band]) / static_cast<double>(n);
    table.per_band[band] = acc;
    sum += acc;
  }
  table.average = sum / static_cast<double>(table.per_band.size());
  return table;
}

std::vector<ServiceScore> compare_services(
    const std::map<std::string, std::vector<PairedSample>>& predictions_by_estimator) {
  std::set<std::string> all_subjects;
  for (const auto& [id, samples] : predictions_by_estimator) {
    for (const auto& s : samples) all_subjects.insert(s.subject_id);
  }
  std::vector<ServiceScore> scores;
  for (const auto& [id, samples] : predictions_by_estimator) {
    std::set<std::string> covered;
    for (const auto& s : samples) covered.insert(s.subject_id);
    if (covered.size() != all_subjects.size()) {
      throw CoverageMismatch(id, all_subjects.size() - covered.size());
    }
    scores.push_back({id, mae(samples)});
  }
  std::sort(scores.begin(), scores.end(), [](const ServiceScore& a, const ServiceScore& b) {
    if (a.mae != b.mae) return a.mae < b.mae;
    return a.estimator_id < b.estimator_id;
  });
  return scores;
}

std::vector<PairedSample> pair_with_labels(const core::Manifest& manifest,
                                           std::span<const core::Prediction> predictions,
                                           const std::string& estimator_id) {
  std::unordered_map<std::string_view, double> point;
  for (const auto& p : predictions) {
    if (p.estimator_id == estimator_id) point.emplace(p.subject_id, p.point);
  }
  if (point.empty()) throw UnknownEstimator(estimator_id);
  std::vector<PairedSample> out;
  out.reserve(manifest.size());
  std::size_t missing = 0;
  for (const auto& r : manifest.records()) {
    const auto it = point.find(r.subject_id);
    if (it == point.end()) {
      ++missing;
      continue;
    }
    out.push_back({r.subject_id, it->second, r.age});
  }
  if (missing) throw CoverageMismatch(estimator_id, missing);
  return out;
}

}  // namespace agestack::metrics
