#include <gtest/gtest.h>

#include "agestack/error.hpp"
#include "agestack/learners/model.hpp"
#include "support/fixtures.hpp"

using namespace agestack;
using namespace agestack::learners;

namespace {

struct Data {
  FeatureMatrix x;
  std::vector<double> y;
};

Data sample_data() {
  core::SplitMix64 rng(64);
  std::vector<double> v(80 * 3);
  for (auto& e : v) e = rng.uniform() * 30.0;  // full-precision reals
  std::vector<double> y(80);
  for (auto& t : y) t = static_cast<double>(rng.below(26));
  return {FeatureMatrix(80, 3, std::move(v)), std::move(y)};
}

}  // namespace

class ModelJson : public ::testing::TestWithParam<LearnerSpec> {};

TEST_P(ModelJson, RoundTripIsExact) {
  const auto d = sample_data();
  const auto model = fit(GetParam(), d.x, d.y);
  const auto text = to_json(model).dump();
  const auto back = model_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back, model);
  EXPECT_EQ(predict(back, d.x), predict(model, d.x));
  EXPECT_EQ(to_json(back).dump(), text);
}

INSTANTIATE_TEST_SUITE_P(AllLearners, ModelJson,
                         ::testing::Values(LearnerSpec{TreeParams{4, 2}},
                                           LearnerSpec{GbrParams{15, 0.1, 3, 2}},
                                           LearnerSpec{BaggingParams{4, std::nullopt, 2, 7}},
                                           LearnerSpec{LogisticParams{50, 0.5, 1.0, {}}},
                                           LearnerSpec{MeanParams{}}));

TEST(ModelJsonDoc, HeaderAndNestedTree) {
  const auto x = FeatureMatrix::from_rows({{0}, {1}});
  const std::vector<double> y = {0, 10};
  const auto doc = to_json(fit(TreeParams{1, 2}, x, y));
  EXPECT_EQ(doc.at("format"), "agestack-model");
  EXPECT_EQ(doc.at("version"), kModelFormatVersion);
  EXPECT_EQ(doc.at("kind"), "tree");
  const auto text = doc.dump();
  EXPECT_NE(text.find("\"threshold\":0.5"), std::string::npos) << text;
  EXPECT_NE(text.find("\"left\""), std::string::npos);
}

TEST(ModelJsonDoc, MalformedDocumentsRejected) {
  const auto x = FeatureMatrix::from_rows({{0}, {1}});
  const std::vector<double> y = {0, 10};
  auto doc = to_json(fit(TreeParams{1, 2}, x, y));

  auto wrong_version = doc;
  wrong_version["version"] = 99;
  EXPECT_THROW(model_from_json(wrong_version), DataError);
  auto wrong_kind = doc;
  wrong_kind["kind"] = "forest";
  EXPECT_THROW(model_from_json(wrong_kind), DataError);
  auto wrong_format = doc;
  wrong_format["format"] = "other";
  EXPECT_THROW(model_from_json(wrong_format), DataError);
  EXPECT_THROW(model_from_json(nlohmann::json::object()), DataError);
  EXPECT_THROW(model_from_json(nlohmann::json::parse("[1,2]")), DataError);
}

TEST(LearnerNames, Stable) {
  EXPECT_EQ(learner_name(TreeParams{}), "tree");
  EXPECT_EQ(learner_name(GbrParams{}), "gbr");
  EXPECT_EQ(learner_name(BaggingParams{}), "bagging");
  EXPECT_EQ(learner_name(LogisticParams{}), "logistic");
  EXPECT_EQ(learner_name(MeanParams{}), "mean");
}

TEST(Predict, GbrWithZeroStagesIsInit) {
  const GradientBoostingModel m(4.5, 0.1, 3, {}, 2);
  const auto x = FeatureMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(predict(Model{m}, x), (std::vector<double>{4.5, 4.5}));
  EXPECT_THROW(predict(Model{m}, FeatureMatrix::from_rows({{1}})), DimensionMismatch);
}
