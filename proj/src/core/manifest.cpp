#include "agestack/core/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "agestack/core/csv.hpp"
#include "agestack/core/prng.hpp"
#include "agestack/error.hpp"

namespace agestack::core {

Manifest curate_balanced(std::span<const SubjectRecord> candidates, std::size_t quota,
                         AgeYears age_min, AgeYears age_max, std::uint64_t seed) {
  if (quota == 0) throw InvalidHyperparameter("quota must be positive");
  if (age_max < age_min) throw InvalidHyperparameter("age_max below age_min");

  std::map<int, std::vector<std::size_t>> by_age;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    by_age[candidates[i].age.value()].push_back(i);
  }

  SplitMix64 rng(seed);
  std::vector<SubjectRecord> selected;
  selected.reserve(quota * static_cast<std::size_t>(age_max.value() - age_min.value() + 1));
  for (int age = age_min.value(); age <= age_max.value(); ++age) {
    auto& pool = by_age[age];
    if (pool.size() < quota) throw UnderfilledAge(age, pool.size(), quota);
    // Partial Fisher-Yates: the first `quota` slots become a uniform sample.
    for (std::size_t i = 0; i < quota; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<long>(quota));
    std::sort(chosen.begin(), chosen.end());
    for (const std::size_t idx : chosen) selected.push_back(candidates[idx]);
  }
  return Manifest(std::move(selected), age_min, age_max, quota);
}

std::vector<SubjectRecord> synthetic_candidates(std::size_t per_age, AgeYears age_min,
                                                AgeYears age_max) {
  std::vector<SubjectRecord> out;
  for (int age = age_min.value(); age <= age_max.value(); ++age) {
    for (std::size_t i = 0; i < per_age; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "syn-%03d-%05zu", age, i);
      SubjectRecord r;
      r.subject_id = id;
      r.age = AgeYears(age);
      r.gender = (i % 2 == 0) ? Gender::Female : Gender::Male;
      r.source = Source::Synthetic;
      r.license_tag = "synthetic";
      r.image_ref = std::string("synthetic/") + id + ".png";
      out.push_back(std::move(r));
    }
  }
  return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

void write_comment(std::ostream& out, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
}

void expect_header(const std::vector<csv::Row>& rows, std::string_view header) {
  if (rows.empty()) throw SchemaError(1, 1, "missing header");
  std::ostringstream joined;
  csv::write_row(joined, rows.front().fields);
  std::string got = joined.str();
  got.pop_back();
  if (got != header) {
    throw SchemaError(rows.front().line, 1, "expected header '" + std::string(header) + "'");
  }
}

int parse_int(const csv::Row& row, std::size_t col, std::string_view what) {
  const std::string& s = row.fields[col];
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SchemaError(row.line, col + 1, std::string(what) + " '" + s + "' is not an integer");
  }
  return value;
}

double parse_real(const csv::Row& row, std::size_t col, std::string_view what) {
  const std::string& s = row.fields[col];
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw SchemaError(row.line, col + 1, std::string(what) + " '" + s + "' is not a number");
  }
  return value;
}

std::optional<double> parse_optional_real(const csv::Row& row, std::size_t col,
                                          std::string_view what) {
  if (row.fields[col].empty()) return std::nullopt;
  return parse_real(row, col, what);
}

}  // namespace

void write_manifest(const Manifest& manifest, std::ostream& out, std::string_view comment) {
  write_comment(out, comment);
  out << kManifestHeader << '\n';
  for (const auto& r : manifest.records()) {
    csv::write_row(out, {r.subject_id, std::to_string(r.age.value()),
                         std::string(to_string(r.gender)), std::string(to_string(r.source)),
                         r.license_tag, r.image_ref});
  }
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path,
                    std::string_view comment) {
  auto out = open_out(path);
  write_manifest(manifest, out, comment);
}

Manifest read_manifest(std::istream& in) {
  const auto rows = csv::read_rows(in);
  expect_header(rows, kManifestHeader);
  std::vector<SubjectRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != 6) {
      throw SchemaError(row.line, std::min<std::size_t>(row.fields.size(), 6) + 1,
                        "expected 6 fields, got " + std::to_string(row.fields.size()));
    }
    SubjectRecord r;
    r.subject_id = row.fields[0];
    if (r.subject_id.empty()) throw SchemaError(row.line, 1, "empty subject_id");
    const int age = parse_int(row, 1, "age");
    if (age < 0 || age > kMaxAge) throw SchemaError(row.line, 2, "age out of range");
    r.age = AgeYears(age);
    const auto gender = parse_gender(row.fields[2]);
    if (!gender) throw SchemaError(row.line, 3, "unknown gender '" + row.fields[2] + "'");
    r.gender = *gender;
    const auto source = parse_source(row.fields[3]);
    if (!source) throw SchemaError(row.line, 4, "unknown source '" + row.fields[3] + "'");
    r.source = *source;
    r.license_tag = row.fields[4];
    r.image_ref = row.fields[5];
    records.push_back(std::move(r));
  }
  return Manifest(std::move(records));
}

Manifest read_manifest(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_manifest(in);
}

void write_predictions(std::span<const Prediction> predictions, std::ostream& out,
                       std::string_view comment) {
  write_comment(out, comment);
  out << kPredictionsHeader << '\n';
  const auto opt = [](const std::optional<double>& v) {
    return v ? csv::format_decimal(*v) : std::string();
  };
  for (const auto& p : predictions) {
    csv::write_row(out, {p.subject_id, p.estimator_id, csv::format_decimal(p.point), opt(p.low),
                         opt(p.high), opt(p.latency_ms), p.raw_digest.value_or("")});
  }
}

void write_predictions(std::span<const Prediction> predictions,
                       const std::filesystem::path& path, std::string_view comment) {
  auto out = open_out(path);
  write_predictions(predictions, out, comment);
}

std::vector<Prediction> read_predictions(std::istream& in) {
  const auto rows = csv::read_rows(in);
  expect_header(rows, kPredictionsHeader);
  std::vector<Prediction> out;
  out.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != 7) {
      throw SchemaError(row.line, std::min<std::size_t>(row.fields.size(), 7) + 1,
                        "expected 7 fields, got " + std::to_string(row.fields.size()));
    }
    Prediction p;
    p.subject_id = row.fields[0];
    p.estimator_id = row.fields[1];
    if (p.subject_id.empty()) throw SchemaError(row.line, 1, "empty subject_id");
    if (p.estimator_id.empty()) throw SchemaError(row.line, 2, "empty estimator_id");
    p.point = parse_real(row, 2, "point");
    p.low = parse_optional_real(row, 3, "low");
    p.high = parse_optional_real(row, 4, "high");
    p.latency_ms = parse_optional_real(row, 5, "latency_ms");
    if (!row.fields[6].empty()) {
      const auto& d = row.fields[6];
      if (!std::all_of(d.begin(), d.end(), [](char c) { return std::isxdigit(c); })) {
        throw SchemaError(row.line, 7, "raw_digest is not hex");
      }
      p.raw_digest = d;
    }
    try {
      validate(p);
    } catch (const DataError& e) {
      throw SchemaError(row.line, 3, e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_predictions(in);
}

void sort_predictions(std::vector<Prediction>& predictions) {
  std::sort(predictions.begin(), predictions.end(), [](const Prediction& a, const Prediction& b) {
    return std::tie(a.subject_id, a.estimator_id) < std::tie(b.subject_id, b.estimator_id);
  });
  const auto dup = std::adjacent_find(
      predictions.begin(), predictions.end(), [](const Prediction& a, const Prediction& b) {
        return a.subject_id == b.subject_id && a.estimator_id == b.estimator_id;
      });
  if (dup != predictions.end()) {
    throw DataError("duplicate prediction for (" + dup->subject_id + ", " + dup->estimator_id +
                    ")");
  }
}

}  // namespace agestack::core
