#include <gtest/gtest.h>

#include <sstream>

#include "agestack/core/csv.hpp"
#include "agestack/error.hpp"
#include "agestack/estimators/simulator.hpp"
#include "agestack/report/evaluation.hpp"
#include "agestack/report/figures.hpp"
#include "agestack/report/run_config.hpp"
#include "agestack/report/svg.hpp"
#include "support/fixtures.hpp"

using namespace agestack;
using namespace agestack::report;

namespace {

std::vector<core::Prediction> two_estimators(const core::Manifest& m) {
  auto p = testkit::predictions_for(m, "perfect", [](int a, std::size_t) { return a; });
  const auto off = testkit::predictions_for(m, "off-by-2", [](int a, std::size_t) { return a + 2.0; });
  p.insert(p.end(), off.begin(), off.end());
  return p;
}

}  // namespace

TEST(Evaluate, PerfectEstimatorRanksFirst) {
  const auto m = testkit::balanced_manifest(2, 1);
  const auto rows = evaluate(m, two_estimators(m));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].estimator_id, "perfect");
  EXPECT_EQ(rows[0].mae, 0.0);
  EXPECT_EQ(rows[1].mae, 2.0);
  EXPECT_EQ(rows[0].n, m.size());
  const auto table = mae_table(rows, "MAE");
  EXPECT_NE(table.find("perfect  |   0.000\n"), std::string::npos) << table;
  EXPECT_LT(table.find("perfect"), table.find("off-by-2"));
}

TEST(Evaluate, MetricsCsv) {
  const auto m = testkit::balanced_manifest(1, 1, 16, 17);
  auto preds = testkit::predictions_for(m, "e", [](int a, std::size_t) { return a == 16 ? 16.0 : 20.0; });
  const auto rows = evaluate(m, preds);
  std::ostringstream out;
  write_metrics_csv(rows, out, "stamp");
  EXPECT_EQ(out.str(),
            "# stamp\n"
            "estimator_id,n,mae,acc_0_5,acc_6_10,acc_11_15,acc_16_17,acc_18_25,acc_avg\n"
            "e,2,1.500000,,,,0.500000,,0.500000\n");
}

TEST(Evaluate, BandTableMarksBestPerRow) {
  const auto m = testkit::balanced_manifest(2, 1);
  const auto table = band_table(evaluate(m, two_estimators(m)), "Bands");
  std::istringstream lines(table);
  std::string line;
  int starred = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("16-17", 0) == 0) {
      EXPECT_NE(line.find("*1.00"), std::string::npos) << line;
      EXPECT_NE(line.find(" 0.00"), std::string::npos) << line;
    }
    starred += line.find('*') != std::string::npos;
  }
  EXPECT_EQ(starred, 6);  // five bands plus AVG
}

TEST(Evaluate, MixedSubjectSetsRejected) {
  const auto m = testkit::balanced_manifest(2, 1);
  auto preds = two_estimators(m);
  preds.pop_back();
  EXPECT_THROW(evaluate(m, preds), CoverageMismatch);
}

TEST(Figures, NoiselessCurveEqualsAgePlusBias) {
  const auto m = testkit::balanced_manifest(3, 2);
  estimators::BiasProfile p;
  p.estimator_id = "sim";
  p.bias_knots = {{0, 3.0}, {12, -1.0}, {25, 2.0}};
  p.sigma_knots = {{0, 0.0}};
  const auto preds = estimators::simulate(p, m, 0);
  const auto curves = mean_prediction_curves(m, preds, {"sim"});
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[1].name, "actual");
  EXPECT_TRUE(curves[1].dashed);
  ASSERT_EQ(curves[0].points.size(), 26u);
  for (const auto& [age, mean] : curves[0].points) {
    EXPECT_DOUBLE_EQ(mean, age + p.bias(static_cast<int>(age)));
  }
}

TEST(Figures, FilesAreDeterministicAndStamped) {
  const auto m = testkit::balanced_manifest(2, 5);
  const auto preds = two_estimators(m);
  testkit::TempDir a("fig-a"), b("fig-b");
  const auto pa = write_figures(m, preds, {"perfect", "off-by-2"}, a.path(), "stamp <1>");
  write_figures(m, preds, {"perfect", "off-by-2"}, b.path(), "stamp <1>");
  ASSERT_EQ(pa.size(), 3u);
  for (const auto& name : {"fig1_mean_prediction", "fig2_mae_per_age", "fig4_band_accuracy"}) {
    for (const auto* ext : {".csv", ".svg"}) {
      const auto file = std::string(name) + ext;
      EXPECT_EQ(testkit::read_file(a / file), testkit::read_file(b / file)) << file;
    }
    const auto csv = testkit::read_file(a / (std::string(name) + ".csv"));
    EXPECT_EQ(csv.rfind("# stamp <1>\n", 0), 0u);
    const auto svg = testkit::read_file(a / (std::string(name) + ".svg"));
    EXPECT_NE(svg.find("<!-- stamp <1> -->"), std::string::npos) << svg.substr(0, 300);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
  }
  const auto fig4 = testkit::read_file(a / "fig4_band_accuracy.csv");
  EXPECT_NE(fig4.find("16-17,perfect,1\n"), std::string::npos);
  EXPECT_NE(fig4.find("16-17,off-by-2,0\n"), std::string::npos);
}

TEST(Svg, EscapingAndSeriesCount) {
  EXPECT_EQ(xml_escape("a<b>&\"'"), "a&lt;b&gt;&amp;&quot;&apos;");
  const auto svg = line_chart_svg({"t & t", "x", "y", ""},
                                  {{"one", {{0, 1}, {1, 2}}, false}, {"two", {{0, 3}, {1, 1}}, true}});
  EXPECT_NE(svg.find("t &amp; t"), std::string::npos);
  EXPECT_EQ(svg.find("<!--"), std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 2u);
}

TEST(RunConfigTest, CanonicalDigest) {
  RunConfig a{"stack", 7, {{"k", 10}, {"learners", {"gbr"}}}};
  RunConfig b{"stack", 7, {{"learners", {"gbr"}}, {"k", 10}}};
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(a.digest().size(), 64u);
  b.seed = 8;
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_EQ(a.provenance(), "agestack stack config_sha256=" + a.digest() + " seed=7");

  testkit::TempDir dir("runconfig");
  a.write(dir / "rc.json");
  const auto doc = nlohmann::json::parse(testkit::read_file(dir / "rc.json"));
  EXPECT_EQ(doc.at("command"), "stack");
  EXPECT_EQ(doc.at("seed"), 7);
  EXPECT_EQ(doc.at("settings").at("k"), 10);
}

TEST(RunConfigTest, InputPathsDoNotChangeDigest) {
  RunConfig a{"evaluate", 3, {{"manifest_sha256", "ab"}}, {{"manifest", "/tmp/a/manifest.csv"}}};
  RunConfig b{"evaluate", 3, {{"manifest_sha256", "ab"}}, {{"manifest", "/tmp/b/manifest.csv"}}};
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(a.to_json().at("inputs").at("manifest"), "/tmp/a/manifest.csv");
  b.settings["manifest_sha256"] = "cd";
  EXPECT_NE(a.digest(), b.digest());
}

TEST(ConfigFileTest, SectionsWithDots) {
  const auto c = ConfigFile::parse(
      "[global]\nseed = 3\n[stack]\nk = 5\n[harvest.aws]\nprovider = aws\nendpoint = http://127.0.0.1:1\n");
  EXPECT_EQ(c.get("global", "seed"), "3");
  EXPECT_EQ(c.get("stack", "k"), "5");
  EXPECT_EQ(c.get("harvest.aws", "provider"), "aws");
  EXPECT_FALSE(c.get("stack", "missing").has_value());
  EXPECT_EQ(c.sections(), (std::vector<std::string>{"global", "stack", "harvest.aws"}));
  EXPECT_EQ(c.entries("harvest.aws").size(), 2u);
  EXPECT_THROW(ConfigFile::parse("[unterminated\n"), UsageError);
  EXPECT_THROW(ConfigFile::load("/nonexistent/agestack.ini"), UsageError);
}
