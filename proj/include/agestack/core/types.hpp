#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agestack::core {

inline constexpr int kMaxAge = 130;
inline constexpr int kMaxBandAge = 25;

// Integer age label in years, 0..=130.
class AgeYears {
 public:
  constexpr AgeYears() = default;
  explicit AgeYears(int value);

  constexpr int value() const noexcept { return value_; }
  friend constexpr auto operator<=>(AgeYears, AgeYears) = default;

 private:
  int value_ = 0;
};

// Europol age bands, ordered youngest first.
enum class AgeRange { B0_5 = 0, B6_10, B11_15, B16_17, B18_25 };

inline constexpr std::size_t kBandCount = 5;
inline constexpr std::array<AgeRange, kBandCount> kAllBands = {
    AgeRange::B0_5, AgeRange::B6_10, AgeRange::B11_15, AgeRange::B16_17, AgeRange::B18_25};

struct BandBounds {
  int low;
  int high;
};

// Inclusive bounds of a band.
constexpr BandBounds bounds_of(AgeRange band) {
  constexpr std::array<BandBounds, kBandCount> table = {
      {{0, 5}, {6, 10}, {11, 15}, {16, 17}, {18, 25}}};
  return table[static_cast<std::size_t>(band)];
}

// Throws OutOfRange for ages outside 0..=25.
AgeRange band_of(AgeYears age);
AgeRange band_of(int age);

// "0-5", "6-10", ...
std::string_view band_label(AgeRange band);

enum class Gender { Female, Male, Unknown };
enum class Source { Flickr, Utkface, Imdb, Wiki, Fgnet, Meds, Synthetic };

std::string_view to_string(Gender g);
std::string_view to_string(Source s);
std::optional<Gender> parse_gender(std::string_view text);
std::optional<Source> parse_source(std::string_view text);

struct SubjectRecord {
  std::string subject_id;
  AgeYears age;
  Gender gender = Gender::Unknown;
  Source source = Source::Synthetic;
  std::string license_tag;
  std::string image_ref;

  friend bool operator==(const SubjectRecord&, const SubjectRecord&) = default;
};

// Ordered list of labelled subjects. Balance is a property checked by
// is_balanced(), guaranteed for manifests produced by curate_balanced().
class Manifest {
 public:
  Manifest() = default;
  // Throws DuplicateSubjectId; infers the declared range from the records.
  explicit Manifest(std::vector<SubjectRecord> records);
  // Throws DuplicateSubjectId, OutOfRange (record outside declared range).
  Manifest(std::vector<SubjectRecord> records, AgeYears age_min, AgeYears age_max,
           std::optional<std::size_t> per_age_quota);

  const std::vector<SubjectRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  AgeYears declared_age_min() const noexcept { return age_min_; }
  AgeYears declared_age_max() const noexcept { return age_max_; }
  std::optional<std::size_t> per_age_quota() const noexcept { return quota_; }

  // Every age in [min, max] occurs exactly `quota` times.
  bool is_balanced() const;

  const SubjectRecord* find(std::string_view subject_id) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;

 private:
  std::vector<SubjectRecord> records_;
  AgeYears age_min_;
  AgeYears age_max_;
  std::optional<std::size_t> quota_;
};

// One estimator's output for one subject.
struct Prediction {
  std::string subject_id;
  std::string estimator_id;
  double point = 0.0;
  std::optional<double> low;
  std::optional<double> high;
  std::optional<double> latency_ms;
  std::optional<std::string> raw_digest;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Throws DataError when point is negative/non-finite or low > high.
void validate(const Prediction& p);

}  // namespace agestack::core
