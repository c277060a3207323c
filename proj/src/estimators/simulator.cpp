#include "agestack/estimators/simulator.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "agestack/core/prng.hpp"
#include "agestack/error.hpp"
#include "agestack/metrics/metrics.hpp"
#include "agestack/stacking/stacking.hpp"

namespace agestack::estimators {

namespace {

double interpolate(const std::vector<Knot>& knots, int age) {
  if (age <= knots.front().age) return knots.front().value;
  if (age >= knots.back().age) return knots.back().value;
  const auto hi = std::upper_bound(knots.begin(), knots.end(), age,
                                   [](int a, const Knot& k) { return a < k.age; });
  const auto lo = hi - 1;
  const double t = static_cast<double>(age - lo->age) / static_cast<double>(hi->age - lo->age);
  return lo->value + t * (hi->value - lo->value);
}

void validate_knots(const std::string& id, const char* what, const std::vector<Knot>& knots,
                    bool non_negative) {
  if (knots.empty()) throw InvalidProfile(id + ": no " + what + " knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].value)) throw InvalidProfile(id + ": non-finite " + what);
    if (non_negative && knots[i].value < 0.0) throw InvalidProfile(id + ": negative " + what);
    if (i && knots[i].age <= knots[i - 1].age) {
      throw InvalidProfile(id + ": " + what + " knot ages must be strictly increasing");
    }
  }
}

std::vector<Knot> parse_knots(const std::string& id, const std::string& text) {
  std::vector<Knot> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    Knot k;
    const char* end = token.data() + token.size();
    if (colon == std::string::npos ||
        std::from_chars(token.data(), token.data() + colon, k.age).ec != std::errc{} ||
        std::from_chars(token.data() + colon + 1, end, k.value).ptr != end) {
      throw InvalidProfile(id + ": malformed knot '" + token + "'");
    }
    out.push_back(k);
  }
  return out;
}

}  // namespace

double BiasProfile::bias(int age) const { return interpolate(bias_knots, age); }
double BiasProfile::sigma(int age) const { return interpolate(sigma_knots, age); }

void validate(const BiasProfile& profile) {
  if (profile.estimator_id.empty()) throw InvalidProfile("profile without estimator id");
  validate_knots(profile.estimator_id, "bias", profile.bias_knots, false);
  validate_knots(profile.estimator_id, "sigma", profile.sigma_knots, true);
  if (!std::isfinite(profile.clamp_min) || profile.clamp_min < 0.0) {
    throw InvalidProfile(profile.estimator_id + ": clamp_min must be a non-negative number");
  }
}

std::vector<BiasProfile> read_profiles(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidProfile(std::string("profile file: ") + e.what());
  }
  const auto format = tree.get_optional<std::string>("meta.format");
  const auto version = tree.get_optional<int>("meta.version");
  if (!format || *format != "agestack-profiles" || !version || *version != 1) {
    throw InvalidProfile("profile file must declare [meta] format = agestack-profiles, version = 1");
  }
  std::vector<BiasProfile> out;
  for (const auto& [section, body] : tree) {
    if (section == "meta") continue;
    BiasProfile p;
    p.estimator_id = section;
    p.bias_knots = parse_knots(section, body.get<std::string>("bias", ""));
    p.sigma_knots = parse_knots(section, body.get<std::string>("sigma", "0:0"));
    p.clamp_min = body.get<double>("clamp_min", 0.0);
    const auto output = body.get<std::string>("output", "point");
    if (output == "point") {
      p.output = SimulatedOutput::Point;
    } else if (output == "bands") {
      p.output = SimulatedOutput::Bands;
    } else {
      throw InvalidProfile(section + ": output must be point or bands");
    }
    validate(p);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<BiasProfile> read_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open profile file '" + path.string() + "'");
  return read_profiles(in);
}

const BiasProfile& find_profile(const std::vector<BiasProfile>& profiles, const std::string& id) {
  const auto it = std::find_if(profiles.begin(), profiles.end(),
                               [&](const BiasProfile& p) { return p.estimator_id == id; });
  if (it == profiles.end()) throw UnknownEstimator(id);
  return *it;
}

std::vector<core::Prediction> simulate(const BiasProfile& profile, const core::Manifest& subjects,
                                       std::uint64_t seed) {
  validate(profile);
  core::SplitMix64 rng(seed ^ core::fnv1a64(profile.estimator_id));
  std::vector<core::Prediction> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects.records()) {
    const int age = s.age.value();
    const double z = rng.normal();
    double value = std::max(profile.clamp_min, age + profile.bias(age) + profile.sigma(age) * z);
    if (profile.output == SimulatedOutput::Bands) {
      value = stacking::ds13k_feature(metrics::predicted_band(value));
    }
    core::Prediction p;
    p.subject_id = s.subject_id;
    p.estimator_id = profile.estimator_id;
    p.point = value;
    out.push_back(std::move(p));
  }
  return out;
}

SimulatorAdapter::SimulatorAdapter(const BiasProfile& profile, const core::Manifest& subjects,
                                   std::uint64_t seed)
    : id_(profile.estimator_id), bands_(profile.output == SimulatedOutput::Bands) {
  for (auto& p : simulate(profile, subjects, seed)) {
    auto key = p.subject_id;
    by_subject_.emplace(std::move(key), std::move(p));
  }
}

Capabilities SimulatorAdapter::capabilities() const {
  return Capabilities{false, bands_, true, true};
}

core::Prediction SimulatorAdapter::predict(const core::SubjectRecord& subject) {
  const auto it = by_subject_.find(subject.subject_id);
  if (it == by_subject_.end()) throw MissingSubject(id_, subject.subject_id);
  return it->second;
}

}  // namespace agestack::estimators
