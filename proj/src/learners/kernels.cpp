#include "agestack/learners/kernels.hpp"

#include <algorithm>
#include <numeric>

namespace agestack::learners::kernels {

namespace {

// Below this many (samples x features) the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelWork = 4096;

double midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  return m < b ? m : a;
}

std::optional<SplitChoice> scan_feature(const FeatureMatrix& x, std::span<const double> y,
                                        std::span<const std::uint32_t> order,
                                        std::size_t feature) {
  const std::size_t n = order.size();
  double total = 0.0;
  double total_sq = 0.0;
  for (const auto i : order) {
    total += y[i];
    total_sq += y[i] * y[i];
  }
  std::optional<SplitChoice> best;
  double left = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    left += y[order[k - 1]];
    const double a = x(order[k - 1], feature);
    const double b = x(order[k], feature);
    if (!(a < b)) continue;
    const double nl = static_cast<double>(k);
    const double nr = static_cast<double>(n - k);
    const double right = total - left;
    const double sse = total_sq - left * left / nl - right * right / nr;
    if (!best || sse < best->sse) best = SplitChoice{feature, midpoint(a, b), sse};
  }
  return best;
}

std::optional<SplitChoice> reduce(std::span<const std::optional<SplitChoice>> per_feature) {
  std::optional<SplitChoice> best;
  for (const auto& c : per_feature) {
    if (c && (!best || c->sse < best->sse)) best = c;
  }
  return best;
}

}  // namespace

SortedColumns SortedColumns::build(const FeatureMatrix& x) {
  SortedColumns cols;
  cols.order.resize(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& o = cols.order[f];
    o.resize(x.rows());
    std::iota(o.begin(), o.end(), std::uint32_t{0});
    std::stable_sort(o.begin(), o.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return x(a, f) < x(b, f); });
  }
  return cols;
}

std::optional<SplitChoice> best_split_serial(const FeatureMatrix& x, std::span<const double> y,
                                             const SortedColumns& cols, std::size_t begin,
                                             std::size_t end) {
  std::vector<std::optional<SplitChoice>> per_feature(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    per_feature[f] =
        scan_feature(x, y, std::span(cols.order[f]).subspan(begin, end - begin), f);
  }
  return reduce(per_feature);
}

std::optional<SplitChoice> best_split_parallel(const FeatureMatrix& x, std::span<const double> y,
                                               const SortedColumns& cols, std::size_t begin,
                                               std::size_t end) {
  const auto d = static_cast<std::ptrdiff_t>(x.cols());
  std::vector<std::optional<SplitChoice>> per_feature(x.cols());
  const bool worth_it = (end - begin) * x.cols() >= kParallelWork;
#pragma omp parallel for schedule(static) if (worth_it)
  for (std::ptrdiff_t f = 0; f < d; ++f) {
    const auto feature = static_cast<std::size_t>(f);
    per_feature[feature] =
        scan_feature(x, y, std::span(cols.order[feature]).subspan(begin, end - begin), feature);
  }
  return reduce(per_feature);
}

std::size_t partition(Execution exec, const FeatureMatrix& x, SortedColumns& cols,
                      std::size_t begin, std::size_t end, const SplitChoice& split,
                      std::vector<std::uint32_t>& scratch) {
  const auto goes_left = [&](std::uint32_t i) { return x(i, split.feature) <= split.threshold; };
  const std::size_t n_left = static_cast<std::size_t>(
      std::count_if(cols.order[0].begin() + static_cast<std::ptrdiff_t>(begin),
                    cols.order[0].begin() + static_cast<std::ptrdiff_t>(end), goes_left));

  const auto partition_column = [&](std::vector<std::uint32_t>& column,
                                    std::vector<std::uint32_t>& buffer) {
    buffer.clear();
    std::size_t write = begin;
    for (std::size_t k = begin; k < end; ++k) {
      if (goes_left(column[k])) {
        column[write++] = column[k];
      } else {
        buffer.push_back(column[k]);
      }
    }
    std::copy(buffer.begin(), buffer.end(), column.begin() + static_cast<std::ptrdiff_t>(write));
  };

  const auto d = static_cast<std::ptrdiff_t>(cols.order.size());
  const bool worth_it =
      exec == Execution::Parallel && (end - begin) * cols.order.size() >= kParallelWork;
  if (worth_it) {
#pragma omp parallel
    {
      std::vector<std::uint32_t> buffer;
      buffer.reserve(end - begin);
#pragma omp for schedule(static)
      for (std::ptrdiff_t f = 0; f < d; ++f) partition_column(cols.order[f], buffer);
    }
  } else {
    for (std::ptrdiff_t f = 0; f < d; ++f) partition_column(cols.order[f], scratch);
  }
  return begin + n_left;
}

}  // namespace agestack::learners::kernels
