#include <gtest/gtest.h>

#include "agestack/error.hpp"
#include "agestack/learners/boosting.hpp"
#include "agestack/learners/tree.hpp"
#include "support/fixtures.hpp"

using namespace agestack;
using namespace agestack::learners;

namespace {

double mse(std::span<const double> p, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  return s / static_cast<double>(y.size());
}

}  // namespace

TEST(Gbr, TrainingMseNonIncreasingAndBeatsSingleTree) {
  core::SplitMix64 rng(123);
  for (int c = 0; c < 20; ++c) {
    const auto x = testkit::random_matrix(120, 4, rng, 10);
    const auto y = testkit::random_targets(120, rng);
    const auto model = fit_gbr(x, y, GbrParams{100, 0.1, 3, 2});
    const auto curve = staged_mse(model, x, y);
    ASSERT_EQ(curve.size(), 101u);
    for (std::size_t m = 1; m < curve.size(); ++m) {
      EXPECT_LE(curve[m], curve[m - 1] + 1e-12) << "case " << c << " stage " << m;
    }
    const auto single = fit_tree(x, y, TreeParams{3, 2});
    EXPECT_LT(curve.back(), mse(single.predict(x), y));
    EXPECT_NEAR(curve.back(), mse(model.predict(x), y), 1e-9);
  }
}

TEST(Gbr, InitIsMeanAndStagesFitResiduals) {
  const auto x = FeatureMatrix::from_rows({{0}, {1}});
  const std::vector<double> y = {2, 6};
  const auto m = fit_gbr(x, y, GbrParams{1, 0.5, 1, 2});
  EXPECT_DOUBLE_EQ(m.init_value(), 4.0);
  // One stage: residuals -2, +2, scaled by 0.5.
  EXPECT_DOUBLE_EQ(m.predict_one(x.row(0)), 3.0);
  EXPECT_DOUBLE_EQ(m.predict_one(x.row(1)), 5.0);
}

TEST(Gbr, InvalidHyperparameters) {
  const auto x = FeatureMatrix::from_rows({{0}, {1}});
  const std::vector<double> y = {2, 6};
  EXPECT_THROW(fit_gbr(x, y, GbrParams{0, 0.1, 3, 2}), InvalidHyperparameter);
  EXPECT_THROW(fit_gbr(x, y, GbrParams{10, 0.0, 3, 2}), InvalidHyperparameter);
  EXPECT_THROW(fit_gbr(x, y, GbrParams{10, 1.5, 3, 2}), InvalidHyperparameter);
}
