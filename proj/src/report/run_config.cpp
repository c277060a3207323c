#include "agestack/report/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <fstream>
#include <sstream>

#include "agestack/core/digest.hpp"
#include "agestack/error.hpp"

namespace agestack::report {

namespace {

nlohmann::json hashed_part(const RunConfig& rc) {
  return {{"format", "agestack-run-config"},
          {"version", 1},
          {"command", rc.command},
          {"seed", rc.seed},
          {"settings", rc.settings}};
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  auto doc = hashed_part(*this);
  doc["inputs"] = inputs;
  return doc;
}

std::string RunConfig::digest() const { return core::sha256_hex(hashed_part(*this).dump()); }

std::string RunConfig::provenance() const {
  return "agestack " + command + " config_sha256=" + digest() + " seed=" + std::to_string(seed);
}

void RunConfig::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << to_json().dump(2) << '\n';
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, cfg.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  return cfg;
}

std::optional<std::string> ConfigFile::get(const std::string& section,
                                           const std::string& key) const {
  const auto s = tree_.get_child_optional(boost::property_tree::ptree::path_type(section, '\0'));
  if (!s) return std::nullopt;
  const auto v = s->get_optional<std::string>(boost::property_tree::ptree::path_type(key, '\0'));
  if (!v) return std::nullopt;
  return *v;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, body] : tree_) out.push_back(name);
  return out;
}

std::vector<std::pair<std::string, std::string>> ConfigFile::entries(
    const std::string& section) const {
  std::vector<std::pair<std::string, std::string>> out;
  const auto s = tree_.get_child_optional(boost::property_tree::ptree::path_type(section, '\0'));
  if (!s) return out;
  for (const auto& [k, v] : *s) out.emplace_back(k, v.data());
  return out;
}

}  // namespace agestack::report
