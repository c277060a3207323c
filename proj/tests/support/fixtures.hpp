#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "agestack/core/prng.hpp"
#include "agestack/core/types.hpp"
#include "agestack/learners/feature_matrix.hpp"

namespace agestack::testkit {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

core::SubjectRecord subject(const std::string& id, int age);

// quota subjects for each age in [age_min, age_max], curated from a
// synthetic pool twice that size.
core::Manifest balanced_manifest(std::size_t quota, std::uint64_t seed, int age_min = 0,
                                 int age_max = 25);

// One prediction per manifest subject: point = f(true age, position).
std::vector<core::Prediction> predictions_for(const core::Manifest& manifest,
                                              const std::string& estimator_id,
                                              const std::function<double(int, std::size_t)>& f);

// Values drawn from a small integer grid so ties and duplicates are common.
learners::FeatureMatrix random_matrix(std::size_t n, std::size_t d, core::SplitMix64& rng,
                                      int levels = 8);
std::vector<double> random_targets(std::size_t n, core::SplitMix64& rng);

}  // namespace agestack::testkit
