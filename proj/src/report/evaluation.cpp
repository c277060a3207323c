#include "agestack/report/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "agestack/core/csv.hpp"
#include "agestack/error.hpp"

namespace agestack::report {

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

}  // namespace

std::vector<EvaluationRow> evaluate(const core::Manifest& manifest,
                                    std::span<const core::Prediction> predictions,
                                    std::vector<std::string> estimator_ids) {
  if (estimator_ids.empty()) {
    std::set<std::string> ids;
    for (const auto& p : predictions) ids.insert(p.estimator_id);
    estimator_ids.assign(ids.begin(), ids.end());
  }
  if (estimator_ids.empty()) throw EmptyInput("no predictions to evaluate");

  std::map<std::string, std::vector<metrics::PairedSample>> paired;
  for (const auto& id : estimator_ids) {
    paired[id] = metrics::pair_with_labels(manifest, predictions, id);
  }
  const auto ranking = metrics::compare_services(paired);
  std::vector<EvaluationRow> rows;
  for (const auto& score : ranking) {
    const auto& samples = paired.at(score.estimator_id);
    rows.push_back({score.estimator_id, samples.size(), score.mae,
                    metrics::band_accuracy(samples)});
  }
  return rows;
}

void write_metrics_csv(const std::vector<EvaluationRow>& rows, std::ostream& out,
                       std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "estimator_id,n,mae,acc_0_5,acc_6_10,acc_11_15,acc_16_17,acc_18_25,acc_avg\n";
  for (const auto& r : rows) {
    std::vector<std::string> fields{r.estimator_id, std::to_string(r.n), fixed(r.mae, 6)};
    for (const auto band : core::kAllBands) {
      const auto it = r.bands.per_band.find(band);
      fields.push_back(it == r.bands.per_band.end() ? std::string() : fixed(it->second, 6));
    }
    fields.push_back(fixed(r.bands.average, 6));
    core::csv::write_row(out, fields);
  }
}

std::string mae_table(const std::vector<EvaluationRow>& rows, std::string_view title) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.estimator_id.size());
  std::ostringstream out;
  out << title << '\n';
  const std::string rule(width + 12, '-');
  out << rule << '\n' << pad("Method", width) << " | " << pad("MAE", 7, true) << '\n' << rule << '\n';
  for (const auto& r : rows) {
    out << pad(r.estimator_id, width) << " | " << pad(fixed(r.mae, 3), 7, true) << '\n';
  }
  out << rule << '\n';
  return out.str();
}

std::string band_table(const std::vector<EvaluationRow>& rows, std::string_view title) {
  std::vector<EvaluationRow> cols = rows;
  std::sort(cols.begin(), cols.end(),
            [](const EvaluationRow& a, const EvaluationRow& b) { return a.estimator_id < b.estimator_id; });
  std::size_t width = 7;
  for (const auto& c : cols) width = std::max(width, c.estimator_id.size() + 1);

  std::ostringstream out;
  out << title << '\n';
  const std::string rule(7 + cols.size() * (width + 3), '-');
  out << rule << '\n' << pad("Range", 7);
  for (const auto& c : cols) out << " | " << pad(c.estimator_id, width, true);
  out << '\n' << rule << '\n';

  const auto emit = [&](std::string_view label, const std::vector<std::optional<double>>& values,
                        int digits) {
    std::optional<double> best;
    for (const auto& v : values) {
      if (v && (!best || *v > *best)) best = v;
    }
    out << pad(std::string(label), 7);
    for (const auto& v : values) {
      std::string cell = v ? fixed(*v, digits) : std::string("-");
      if (v && best && *v == *best) cell = "*" + cell;
      out << " | " << pad(cell, width, true);
    }
    out << '\n';
  };

  for (const auto band : core::kAllBands) {
    std::vector<std::optional<double>> values;
    for (const auto& c : cols) {
      const auto it = c.bands.per_band.find(band);
      values.push_back(it == c.bands.per_band.end() ? std::nullopt
                                                    : std::optional<double>(it->second));
    }
    emit(core::band_label(band), values, 2);
  }
  out << rule << '\n';
  std::vector<std::optional<double>> avg;
  for (const auto& c : cols) avg.emplace_back(c.bands.average);
  emit("AVG", avg, 3);
  out << rule << '\n';
  return out.str();
}

std::string mae_per_age_table(const core::Manifest& manifest,
                              std::span<const core::Prediction> predictions,
                              const std::vector<std::string>& estimator_ids,
                              std::string_view title) {
  std::vector<std::map<core::AgeYears, double>> curves;
  std::set<core::AgeYears> ages;
  std::size_t width = 6;
  for (const auto& id : estimator_ids) {
    const auto samples = metrics::pair_with_labels(manifest, predictions, id);
    curves.push_back(metrics::mae_per_age(samples));
    for (const auto& [age, v] : curves.back()) ages.insert(age);
    width = std::max(width, id.size());
  }
  std::ostringstream out;
  out << title << '\n' << pad("Age", 4);
  for (const auto& id : estimator_ids) out << " | " << pad(id, width, true);
  out << '\n';
  for (const auto age : ages) {
    out << pad(std::to_string(age.value()), 4);
    for (const auto& curve : curves) {
      const auto it = curve.find(age);
      out << " | " << pad(it == curve.end() ? "-" : fixed(it->second, 3), width, true);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace agestack::report
