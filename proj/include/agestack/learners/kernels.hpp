#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agestack/core/execution.hpp"
#include "agestack/learners/feature_matrix.hpp"

namespace agestack::learners::kernels {

// For every feature, the training sample indices sorted by that feature's
// value (ties by index). A tree node owns the same [begin, end) range in
// every column; splitting a node stably partitions each column's range.
struct SortedColumns {
  std::vector<std::vector<std::uint32_t>> order;

  static SortedColumns build(const FeatureMatrix& x);
};

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double sse = 0.0;  // summed squared error of the two children
};

// Best CART split of the samples in [begin, end). Candidate thresholds are
// midpoints of consecutive distinct values; ties go to the lowest feature,
// then the lowest threshold. Empty when every feature is constant.
std::optional<SplitChoice> best_split_serial(const FeatureMatrix& x, std::span<const double> y,
                                             const SortedColumns& cols, std::size_t begin,
                                             std::size_t end);
// OpenMP over features; bit-identical to the serial path.
std::optional<SplitChoice> best_split_parallel(const FeatureMatrix& x, std::span<const double> y,
                                               const SortedColumns& cols, std::size_t begin,
                                               std::size_t end);

inline std::optional<SplitChoice> best_split(Execution exec, const FeatureMatrix& x,
                                             std::span<const double> y, const SortedColumns& cols,
                                             std::size_t begin, std::size_t end) {
  return exec == Execution::Parallel ? best_split_parallel(x, y, cols, begin, end)
                                     : best_split_serial(x, y, cols, begin, end);
}

// Stable partition of [begin, end) in every column so that samples with
// x[feature] <= threshold come first. Returns the split point.
std::size_t partition(Execution exec, const FeatureMatrix& x, SortedColumns& cols,
                      std::size_t begin, std::size_t end, const SplitChoice& split,
                      std::vector<std::uint32_t>& scratch);

// Fills out[i] = f(i) for i in [0, n), in parallel when requested.
template <typename F>
void fill_rows(Execution exec, std::span<double> out, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(static_cast<std::size_t>(i));
  }
}

}  // namespace agestack::learners::kernels
