#include <gtest/gtest.h>
#include <omp.h>

#include <numeric>

#include "agestack/learners/bagging.hpp"
#include "agestack/learners/boosting.hpp"
#include "agestack/learners/kernels.hpp"
#include "agestack/learners/tree.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace agestack;
using namespace agestack::learners;

// The serial kernels are the reference; the OpenMP paths must agree bit for
// bit regardless of thread count.
class SerialVsParallel : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override { omp_set_num_threads(GetParam()); }
};

TEST_P(SerialVsParallel, BestSplit) {
  core::SplitMix64 rng(17);
  for (int c = 0; c < 20; ++c) {
    const auto x = testkit::random_matrix(1500, 5, rng, 40);
    const auto y = testkit::random_targets(1500, rng);
    const auto cols = kernels::SortedColumns::build(x);
    const auto s = kernels::best_split_serial(x, y, cols, 0, x.rows());
    const auto p = kernels::best_split_parallel(x, y, cols, 0, x.rows());
    ASSERT_TRUE(s && p);
    EXPECT_EQ(s->feature, p->feature);
    EXPECT_EQ(s->threshold, p->threshold);
    EXPECT_EQ(s->sse, p->sse);
  }
}

TEST_P(SerialVsParallel, SortedColumnsAndPartition) {
  core::SplitMix64 rng(5);
  const auto x = testkit::random_matrix(3000, 3, rng, 50);
  const auto y = testkit::random_targets(3000, rng);
  auto a = kernels::SortedColumns::build(x);
  auto b = a;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (std::size_t i = 1; i < x.rows(); ++i) {
      const auto prev = a.order[f][i - 1], cur = a.order[f][i];
      ASSERT_TRUE(x(prev, f) < x(cur, f) || (x(prev, f) == x(cur, f) && prev < cur));
    }
  }
  const auto split = *kernels::best_split_serial(x, y, a, 0, x.rows());
  std::vector<std::uint32_t> scratch;
  const auto ms = kernels::partition(Execution::Serial, x, a, 0, x.rows(), split, scratch);
  const auto mp = kernels::partition(Execution::Parallel, x, b, 0, x.rows(), split, scratch);
  EXPECT_EQ(ms, mp);
  EXPECT_EQ(a.order, b.order);
}

TEST_P(SerialVsParallel, WholeModels) {
  core::SplitMix64 rng(23);
  const auto x = testkit::random_matrix(2000, 5, rng, 30);
  const auto y = testkit::random_targets(2000, rng);
  EXPECT_EQ(fit_tree(x, y, TreeParams{6, 2}, Execution::Serial),
            fit_tree(x, y, TreeParams{6, 2}, Execution::Parallel));
  const GbrParams g{20, 0.1, 3, 2};
  const auto gs = fit_gbr(x, y, g, Execution::Serial);
  const auto gp = fit_gbr(x, y, g, Execution::Parallel);
  EXPECT_EQ(gs, gp);
  EXPECT_EQ(gs.predict(x, Execution::Serial), gp.predict(x, Execution::Parallel));
  BaggingParams b;
  b.n_members = 6;
  b.seed = 9;
  EXPECT_EQ(fit_bagging(x, y, b, Execution::Serial), fit_bagging(x, y, b, Execution::Parallel));
}

INSTANTIATE_TEST_SUITE_P(Threads, SerialVsParallel, ::testing::Values(1, 3, 8));

TEST(Kernels, SplitSseMatchesOracle) {
  core::SplitMix64 rng(2);
  for (int c = 0; c < 50; ++c) {
    const auto x = testkit::random_matrix(25, 3, rng, 5);
    const auto y = testkit::random_targets(25, rng);
    const auto cols = kernels::SortedColumns::build(x);
    const auto s = kernels::best_split_serial(x, y, cols, 0, x.rows());
    std::vector<std::size_t> all(x.rows());
    std::iota(all.begin(), all.end(), 0);
    const auto best = testkit::brute_force_best_sse(x, y, all);
    ASSERT_EQ(s.has_value(), best.has_value());
    if (!s) continue;
    EXPECT_NEAR(s->sse, *best, 1e-9);
    EXPECT_NEAR(testkit::split_sse(x, y, all, s->feature, s->threshold), *best, 1e-9);
  }
}
