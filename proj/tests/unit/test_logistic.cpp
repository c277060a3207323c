#include <gtest/gtest.h>

#include <numeric>

#include "agestack/error.hpp"
#include "agestack/learners/logistic.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace agestack;
using namespace agestack::learners;

TEST(Logistic, GradientMatchesFiniteDifferences) {
  core::SplitMix64 rng(31);
  for (int batch = 0; batch < 10; ++batch) {
    std::vector<double> v(10 * 3);
    for (auto& e : v) e = rng.normal();
    const FeatureMatrix x(10, 3, std::move(v));
    const std::size_t k = 2 + rng.below(4);
    std::vector<std::size_t> target(10);
    for (auto& t : target) t = rng.below(k);
    const SoftmaxObjective obj(x, target, k, 0.7);
    std::vector<double> params(obj.n_params());
    for (auto& p : params) p = rng.normal();
    std::vector<double> analytic(params.size());
    obj.loss_and_gradient(params, analytic);
    const auto numeric = testkit::numeric_gradient(obj, params, 1e-5);
    EXPECT_LT(testkit::max_relative_error(analytic, numeric), 1e-4) << "batch " << batch;
  }
}

TEST(Logistic, LossOfZeroWeightsIsLogK) {
  const auto x = FeatureMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  const SoftmaxObjective obj(x, {0, 1, 2}, 3, 1.0);
  std::vector<double> zeros(obj.n_params(), 0.0);
  EXPECT_NEAR(obj.loss(zeros), std::log(3.0), 1e-15);
}

TEST(Logistic, SeparableToyReachesFullAccuracy) {
  const auto x = FeatureMatrix::from_rows({{-3}, {-2}, {-1.5}, {-0.5}, {0.5}, {1}, {2}, {4}});
  const std::vector<double> y = {4, 4, 4, 4, 9, 9, 9, 9};
  LogisticParams p;
  p.l2_lambda = 0.0;
  p.epochs = 500;
  const auto m = fit_logistic(x, y, p);
  EXPECT_EQ(m.predict(x), y);
}

TEST(Logistic, ProbabilitiesSumToOne) {
  core::SplitMix64 rng(8);
  const auto x = testkit::random_matrix(60, 3, rng, 20);
  std::vector<double> y(60);
  for (auto& t : y) t = static_cast<double>(rng.below(6));
  const auto m = fit_logistic(x, y, LogisticParams{});
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto p = m.probabilities(x.row(i));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(Logistic, ZeroWeightsGiveUniformAndLowestTie) {
  const Standardizer s{{0.0}, {1.0}};
  const LogisticModel m({3, 7, 11}, {0, 0, 0}, {0, 0, 0}, s, 1.0);
  const std::vector<double> row = {2.0};
  for (double p : m.probabilities(row)) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  EXPECT_EQ(m.predict_class(row), 3);
}

TEST(Logistic, DeterministicAndStandardized) {
  core::SplitMix64 rng(4);
  auto x = testkit::random_matrix(40, 2, rng);
  std::vector<double> y(40);
  for (auto& t : y) t = static_cast<double>(rng.below(3));
  const auto a = fit_logistic(x, y, LogisticParams{});
  EXPECT_EQ(a, fit_logistic(x, y, LogisticParams{}));

  const auto st = Standardizer::fit(FeatureMatrix::from_rows({{1, 5}, {3, 5}}));
  EXPECT_DOUBLE_EQ(st.mean[0], 2.0);
  const auto z = st.apply(FeatureMatrix::from_rows({{3, 9}}));
  EXPECT_DOUBLE_EQ(z(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(z(0, 1), 0.0);
}

TEST(Logistic, ErrorsAndDivergenceGuard) {
  const auto x = FeatureMatrix::from_rows({{0}, {1}});
  EXPECT_THROW(fit_logistic(x, std::vector<double>{1}, LogisticParams{}), DimensionMismatch);
  LogisticParams bad;
  bad.step = 0.0;
  EXPECT_THROW(fit_logistic(x, std::vector<double>{1, 2}, bad), InvalidHyperparameter);
  LogisticParams missing;
  missing.classes = {1};
  EXPECT_THROW(fit_logistic(x, std::vector<double>{1, 2}, missing), InvalidHyperparameter);
  LogisticParams huge;
  huge.step = 1e308;
  huge.l2_lambda = 1e308;
  EXPECT_THROW(fit_logistic(x, std::vector<double>{1, 2}, huge), NonFiniteLoss);
}
