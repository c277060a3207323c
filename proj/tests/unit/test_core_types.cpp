#include <gtest/gtest.h>

#include <sstream>

#include "agestack/core/csv.hpp"
#include "agestack/core/prng.hpp"
#include "agestack/core/types.hpp"
#include "agestack/error.hpp"
#include "support/fixtures.hpp"

using namespace agestack;
using namespace agestack::core;

TEST(Bands, ExhaustiveAgainstPublishedTable) {
  // Written out by hand, one entry per age.
  const AgeRange expected[26] = {
      AgeRange::B0_5,   AgeRange::B0_5,   AgeRange::B0_5,   AgeRange::B0_5,   AgeRange::B0_5,
      AgeRange::B0_5,   AgeRange::B6_10,  AgeRange::B6_10,  AgeRange::B6_10,  AgeRange::B6_10,
      AgeRange::B6_10,  AgeRange::B11_15, AgeRange::B11_15, AgeRange::B11_15, AgeRange::B11_15,
      AgeRange::B11_15, AgeRange::B16_17, AgeRange::B16_17, AgeRange::B18_25, AgeRange::B18_25,
      AgeRange::B18_25, AgeRange::B18_25, AgeRange::B18_25, AgeRange::B18_25, AgeRange::B18_25,
      AgeRange::B18_25};
  for (int a = 0; a <= 25; ++a) {
    EXPECT_EQ(band_of(a), expected[a]) << "age " << a;
    EXPECT_EQ(band_of(AgeYears(a)), expected[a]);
    const auto b = bounds_of(band_of(a));
    EXPECT_LE(b.low, a);
    EXPECT_GE(b.high, a);
  }
}

TEST(Bands, OutOfRangeRejected) {
  EXPECT_THROW(band_of(26), OutOfRange);
  EXPECT_THROW(band_of(-1), OutOfRange);
  EXPECT_THROW(band_of(AgeYears(60)), OutOfRange);
}

TEST(Bands, Labels) {
  EXPECT_EQ(band_label(AgeRange::B0_5), "0-5");
  EXPECT_EQ(band_label(AgeRange::B6_10), "6-10");
  EXPECT_EQ(band_label(AgeRange::B11_15), "11-15");
  EXPECT_EQ(band_label(AgeRange::B16_17), "16-17");
  EXPECT_EQ(band_label(AgeRange::B18_25), "18-25");
}

TEST(AgeYearsTest, Bounds) {
  EXPECT_NO_THROW(AgeYears(0));
  EXPECT_NO_THROW(AgeYears(130));
  EXPECT_THROW(AgeYears(131), OutOfRange);
  EXPECT_THROW(AgeYears(-1), OutOfRange);
  EXPECT_LT(AgeYears(3), AgeYears(4));
}

TEST(Enums, RoundTrip) {
  for (auto g : {Gender::Female, Gender::Male, Gender::Unknown}) {
    EXPECT_EQ(parse_gender(to_string(g)), g);
  }
  for (auto s : {Source::Flickr, Source::Utkface, Source::Imdb, Source::Wiki, Source::Fgnet,
                 Source::Meds, Source::Synthetic}) {
    EXPECT_EQ(parse_source(to_string(s)), s);
  }
  EXPECT_FALSE(parse_gender("x").has_value());
  EXPECT_FALSE(parse_source("myspace").has_value());
}

TEST(ManifestTest, RejectsDuplicateIds) {
  std::vector<SubjectRecord> r = {testkit::subject("a", 3), testkit::subject("a", 4)};
  EXPECT_THROW(Manifest{r}, DuplicateSubjectId);
}

TEST(ManifestTest, DeclaredRangeEnforced) {
  std::vector<SubjectRecord> r = {testkit::subject("a", 3), testkit::subject("b", 30)};
  EXPECT_THROW(Manifest(r, AgeYears(0), AgeYears(25), std::nullopt), OutOfRange);
}

TEST(ManifestTest, InfersRangeAndBalance) {
  std::vector<SubjectRecord> r = {testkit::subject("a", 3), testkit::subject("b", 4),
                                  testkit::subject("c", 4), testkit::subject("d", 3)};
  const Manifest m(r);
  EXPECT_EQ(m.declared_age_min().value(), 3);
  EXPECT_EQ(m.declared_age_max().value(), 4);
  EXPECT_TRUE(m.is_balanced());
  EXPECT_EQ(m.per_age_quota(), 2u);
  EXPECT_NE(m.find("c"), nullptr);
  EXPECT_EQ(m.find("z"), nullptr);

  r.push_back(testkit::subject("e", 4));
  EXPECT_FALSE(Manifest(r).is_balanced());
}

TEST(PredictionTest, Validate) {
  Prediction p{"s", "e", 12.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_NO_THROW(validate(p));
  p.point = -1.0;
  EXPECT_THROW(validate(p), DataError);
  p.point = std::nan("");
  EXPECT_THROW(validate(p), DataError);
  p.point = 10.0;
  p.low = 12.0;
  p.high = 8.0;
  EXPECT_THROW(validate(p), DataError);
}

TEST(Csv, EscapeAndReadBack) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "with \"quote\"", "multi\nline", ""});
  EXPECT_EQ(out.str(), "plain,\"with,comma\",\"with \"\"quote\"\"\",\"multi\nline\",\n");
  std::istringstream in("# note\n" + out.str());
  const auto rows = csv::read_rows(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fields,
            (std::vector<std::string>{"plain", "with,comma", "with \"quote\"", "multi\nline", ""}));
}

TEST(Csv, CrlfAndUnterminatedQuote) {
  std::istringstream crlf("a,b\r\n1,2\r\n");
  const auto rows = csv::read_rows(crlf);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(rows[1].line, 2u);
  std::istringstream bad("a,\"b\n");
  EXPECT_THROW(csv::read_rows(bad), SchemaError);
}

TEST(Csv, FormatDecimal) {
  EXPECT_EQ(csv::format_decimal(17.2), "17.2");
  EXPECT_EQ(csv::format_decimal(3.0), "3");
  EXPECT_EQ(csv::format_decimal(0.000001), "0.000001");
  EXPECT_EQ(csv::format_decimal(-0.0), "0");
  EXPECT_EQ(csv::format_decimal(2.5000004), "2.5");
}

TEST(Prng, ReferenceValues) {
  // Published SplitMix64 output for seed 0 and FNV-1a test vectors.
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Prng, BelowStaysInRange) {
  SplitMix64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const auto b = static_cast<std::uint64_t>(1 + i % 17);
    EXPECT_LT(rng.below(b), b);
  }
}
