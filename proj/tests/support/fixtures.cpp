#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <cmath>

#include <unistd.h>

#include "agestack/core/manifest.hpp"

namespace agestack::testkit {

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  core::SplitMix64 rng(core::fnv1a64(tag) ^ static_cast<std::uint64_t>(::getpid()) ^ ++counter);
  path_ = std::filesystem::temp_directory_path() /
          ("agestack-" + tag + "-" + std::to_string(rng() & 0xffffffffULL));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

core::SubjectRecord subject(const std::string& id, int age) {
  core::SubjectRecord r;
  r.subject_id = id;
  r.age = core::AgeYears(age);
  r.license_tag = "cc-by";
  r.image_ref = "img/" + id + ".jpg";
  return r;
}

core::Manifest balanced_manifest(std::size_t quota, std::uint64_t seed, int age_min,
                                 int age_max) {
  const auto pool =
      core::synthetic_candidates(quota * 2, core::AgeYears(age_min), core::AgeYears(age_max));
  return core::curate_balanced(pool, quota, core::AgeYears(age_min), core::AgeYears(age_max),
                               seed);
}

std::vector<core::Prediction> predictions_for(const core::Manifest& manifest,
                                              const std::string& estimator_id,
                                              const std::function<double(int, std::size_t)>& f) {
  std::vector<core::Prediction> out;
  const auto& records = manifest.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    core::Prediction p;
    p.subject_id = records[i].subject_id;
    p.estimator_id = estimator_id;
    p.point = f(records[i].age.value(), i);
    out.push_back(p);
  }
  return out;
}

learners::FeatureMatrix random_matrix(std::size_t n, std::size_t d, core::SplitMix64& rng,
                                      int levels) {
  std::vector<double> v(n * d);
  for (auto& x : v) x = static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)));
  return learners::FeatureMatrix(n, d, std::move(v));
}

std::vector<double> random_targets(std::size_t n, core::SplitMix64& rng) {
  std::vector<double> y(n);
  for (auto& t : y) t = std::round(rng.uniform() * 250.0) / 10.0;
  return y;
}

}  // namespace agestack::testkit
