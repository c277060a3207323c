#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "agestack/core/types.hpp"
#include "agestack/estimators/adapter.hpp"

namespace agestack::estimators {

struct Knot {
  int age = 0;
  double value = 0.0;
  friend bool operator==(const Knot&, const Knot&) = default;
};

enum class SimulatedOutput {
  Point,  // continuous age estimate
  Bands,  // age-band classifier; emits the band midpoint
};

// Systematic per-age error b(a) plus Normal(0, sigma(a)) noise. Both curves
// are piecewise linear through their knots and flat beyond the end knots.
struct BiasProfile {
  std::string estimator_id;
  std::vector<Knot> bias_knots;
  std::vector<Knot> sigma_knots;
  double clamp_min = 0.0;
  SimulatedOutput output = SimulatedOutput::Point;

  double bias(int age) const;
  double sigma(int age) const;
};

// Throws InvalidProfile (no knots, ages not strictly increasing, negative
// sigma, non-finite values).
void validate(const BiasProfile& profile);

// INI document:
//   [meta]        format = agestack-profiles, version = 1
//   [<estimator>] bias = "age:offset ...", sigma = "age:sd ...",
//                 output = point|bands, clamp_min = 0
std::vector<BiasProfile> read_profiles(std::istream& in);
std::vector<BiasProfile> read_profiles(const std::filesystem::path& path);
const BiasProfile& find_profile(const std::vector<BiasProfile>& profiles, const std::string& id);

// prediction(a) = max(clamp_min, a + b(a) + sigma(a) * z), z from the
// Box-Muller transform over SplitMix64(seed ^ fnv1a64(estimator_id)); two
// uniforms are drawn per subject in manifest order. Band profiles then
// quantize to the band midpoint of the rounded value.
std::vector<core::Prediction> simulate(const BiasProfile& profile, const core::Manifest& subjects,
                                       std::uint64_t seed);

// Adapter over a precomputed simulation of one manifest.
class SimulatorAdapter final : public EstimatorAdapter {
 public:
  SimulatorAdapter(const BiasProfile& profile, const core::Manifest& subjects, std::uint64_t seed);

  const std::string& estimator_id() const override { return id_; }
  Capabilities capabilities() const override;
  core::Prediction predict(const core::SubjectRecord& subject) override;

 private:
  std::string id_;
  bool bands_;
  std::unordered_map<std::string, core::Prediction> by_subject_;
};

}  // namespace agestack::estimators
