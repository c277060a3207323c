#include "agestack/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "agestack/error.hpp"

namespace agestack::core {

AgeYears::AgeYears(int value) : value_(value) {
  if (value < 0 || value > kMaxAge) {
    throw OutOfRange("age " + std::to_string(value) + " outside 0.." + std::to_string(kMaxAge));
  }
}

AgeRange band_of(int age) {
  if (age < 0 || age > kMaxBandAge) {
    throw OutOfRange("age " + std::to_string(age) + " outside the banded range 0..25");
  }
  if (age <= 5) return AgeRange::B0_5;
  if (age <= 10) return AgeRange::B6_10;
  if (age <= 15) return AgeRange::B11_15;
  if (age <= 17) return AgeRange::B16_17;
  return AgeRange::B18_25;
}

AgeRange band_of(AgeYears age) { return band_of(age.value()); }

std::string_view band_label(AgeRange band) {
  switch (band) {
    case AgeRange::B0_5: return "0-5";
    case AgeRange::B6_10: return "6-10";
    case AgeRange::B11_15: return "11-15";
    case AgeRange::B16_17: return "16-17";
    case AgeRange::B18_25: return "18-25";
  }
  return "?";
}

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Female: return "female";
    case Gender::Male: return "male";
    case Gender::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Flickr: return "flickr";
    case Source::Utkface: return "utkface";
    case Source::Imdb: return "imdb";
    case Source::Wiki: return "wiki";
    case Source::Fgnet: return "fgnet";
    case Source::Meds: return "meds";
    case Source::Synthetic: return "synthetic";
  }
  return "synthetic";
}

std::optional<Gender> parse_gender(std::string_view text) {
  for (const Gender g : {Gender::Female, Gender::Male, Gender::Unknown}) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

std::optional<Source> parse_source(std::string_view text) {
  for (const Source s : {Source::Flickr, Source::Utkface, Source::Imdb, Source::Wiki,
                         Source::Fgnet, Source::Meds, Source::Synthetic}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

namespace {

void check_unique(const std::vector<SubjectRecord>& records) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (const auto& r : records) {
    if (!seen.insert(r.subject_id).second) throw DuplicateSubjectId(r.subject_id);
  }
}

std::optional<std::size_t> infer_quota(const std::vector<SubjectRecord>& records, int lo,
                                       int hi) {
  if (records.empty()) return std::nullopt;
  std::map<int, std::size_t> counts;
  for (const auto& r : records) ++counts[r.age.value()];
  if (counts.size() != static_cast<std::size_t>(hi - lo + 1)) return std::nullopt;
  const std::size_t quota = counts.begin()->second;
  for (const auto& [age, n] : counts) {
    if (n != quota) return std::nullopt;
  }
  return quota;
}

}  // namespace

Manifest::Manifest(std::vector<SubjectRecord> records) : records_(std::move(records)) {
  check_unique(records_);
  if (!records_.empty()) {
    const auto [lo, hi] = std::minmax_element(
        records_.begin(), records_.end(),
        [](const SubjectRecord& a, const SubjectRecord& b) { return a.age < b.age; });
    age_min_ = lo->age;
    age_max_ = hi->age;
  }
  quota_ = infer_quota(records_, age_min_.value(), age_max_.value());
}

Manifest::Manifest(std::vector<SubjectRecord> records, AgeYears age_min, AgeYears age_max,
                   std::optional<std::size_t> per_age_quota)
    : records_(std::move(records)), age_min_(age_min), age_max_(age_max), quota_(per_age_quota) {
  if (age_max < age_min) throw OutOfRange("declared age_max below age_min");
  check_unique(records_);
  for (const auto& r : records_) {
    if (r.age < age_min_ || age_max_ < r.age) {
      throw OutOfRange("subject '" + r.subject_id + "' age " + std::to_string(r.age.value()) +
                       " outside the declared range");
    }
  }
}

bool Manifest::is_balanced() const {
  if (!quota_ || *quota_ == 0) return false;
  std::map<int, std::size_t> counts;
  for (const auto& r : records_) ++counts[r.age.value()];
  for (int a = age_min_.value(); a <= age_max_.value(); ++a) {
    const auto it = counts.find(a);
    if (it == counts.end() || it->second != *quota_) return false;
  }
  return records_.size() ==
         *quota_ * static_cast<std::size_t>(age_max_.value() - age_min_.value() + 1);
}

const SubjectRecord* Manifest::find(std::string_view subject_id) const {
  const auto it = std::find_if(records_.begin(), records_.end(),
                               [&](const SubjectRecord& r) { return r.subject_id == subject_id; });
  return it == records_.end() ? nullptr : &*it;
}

void validate(const Prediction& p) {
  if (!std::isfinite(p.point) || p.point < 0.0) {
    throw DataError("prediction for '" + p.subject_id + "' by '" + p.estimator_id +
                    "' has invalid point value");
  }
  if (p.low && p.high && *p.low > *p.high) {
    throw DataError("prediction for '" + p.subject_id + "' by '" + p.estimator_id +
                    "' has low > high");
  }
  if (p.latency_ms && (!std::isfinite(*p.latency_ms) || *p.latency_ms < 0.0)) {
    throw DataError("prediction for '" + p.subject_id + "' has negative latency");
  }
}

}  // namespace agestack::core
