#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "agestack/core/types.hpp"

namespace agestack::core {

inline constexpr std::string_view kManifestHeader =
    "subject_id,age,gender,source,license_tag,image_ref";
inline constexpr std::string_view kPredictionsHeader =
    "subject_id,estimator_id,point,low,high,latency_ms,raw_digest";

// Seeded uniform sample of `quota` records per age in [age_min, age_max].
// Records come out grouped by ascending age, each group in the order the
// candidates were supplied. Throws UnderfilledAge.
Manifest curate_balanced(std::span<const SubjectRecord> candidates, std::size_t quota,
                         AgeYears age_min, AgeYears age_max, std::uint64_t seed);

// Candidate pool with `per_age` synthetic subjects for each age in range.
std::vector<SubjectRecord> synthetic_candidates(std::size_t per_age, AgeYears age_min,
                                                AgeYears age_max);

// `comment`, when non-empty, is written as a leading "# ..." line.
void write_manifest(const Manifest& manifest, std::ostream& out, std::string_view comment = {});
void write_manifest(const Manifest& manifest, const std::filesystem::path& path,
                    std::string_view comment = {});
Manifest read_manifest(std::istream& in);
Manifest read_manifest(const std::filesystem::path& path);

void write_predictions(std::span<const Prediction> predictions, std::ostream& out,
                       std::string_view comment = {});
void write_predictions(std::span<const Prediction> predictions,
                       const std::filesystem::path& path, std::string_view comment = {});
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

// Sorts by (subject_id, estimator_id); throws DataError on duplicate pairs.
void sort_predictions(std::vector<Prediction>& predictions);

}  // namespace agestack::core
