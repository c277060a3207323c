#include "agestack/learners/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agestack/error.hpp"

namespace agestack::learners {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) throw DimensionMismatch("feature matrix must be at least 1x1");
  if (values_.size() != rows_ * cols_) {
    throw DimensionMismatch("feature matrix expects " + std::to_string(rows_ * cols_) +
                            " values, got " + std::to_string(values_.size()));
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw DimensionMismatch("feature matrix contains a non-finite value");
  }
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionMismatch("feature matrix must have at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionMismatch("ragged feature rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return FeatureMatrix(rows.size(), cols, std::move(values));
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * cols_);
  for (const std::size_t i : indices) {
    const auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return FeatureMatrix(indices.size(), cols_, std::move(out));
}

FeatureMatrix FeatureMatrix::drop_column(std::size_t c) const {
  if (c >= cols_ || cols_ == 1) throw DimensionMismatch("cannot drop column " + std::to_string(c));
  std::vector<double> out;
  out.reserve(rows_ * (cols_ - 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j != c) out.push_back((*this)(r, j));
    }
  }
  return FeatureMatrix(rows_, cols_ - 1, std::move(out));
}

void check_targets(const FeatureMatrix& x, std::span<const double> targets) {
  if (targets.size() != x.rows()) {
    throw DimensionMismatch("expected " + std::to_string(x.rows()) + " targets, got " +
                            std::to_string(targets.size()));
  }
  if (!std::all_of(targets.begin(), targets.end(), [](double v) { return std::isfinite(v); })) {
    throw DimensionMismatch("targets contain a non-finite value");
  }
}

}  // namespace agestack::learners
