#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agestack::learners {

// Dense row-major matrix of finite reals, at least 1x1.
class FeatureMatrix {
 public:
  // Throws DimensionMismatch on a size mismatch, empty shape, or a
  // non-finite value.
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return values_; }

  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
  FeatureMatrix drop_column(std::size_t c) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// Throws DimensionMismatch unless targets.size() == x.rows().
void check_targets(const FeatureMatrix& x, std::span<const double> targets);

}  // namespace agestack::learners
