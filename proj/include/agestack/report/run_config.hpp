#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

namespace agestack::report {

// The exact settings of one CLI invocation. Serialized as canonical JSON
// (sorted keys); its SHA-256 is the config digest stamped into outputs.
// `inputs` records file locations and is left out of the digest, so the same
// data read from another directory stamps the same digest. Input contents
// belong in `settings` as hashes.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json settings = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string digest() const;
  // "agestack <command> config_sha256=<hex> seed=<seed>"
  std::string provenance() const;
  void write(const std::filesystem::path& path) const;
};

// INI file with one section per subcommand plus [global].
class ConfigFile {
 public:
  ConfigFile() = default;
  // Throws UsageError on a missing or malformed file.
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(const std::string& text);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  // Section names in file order.
  std::vector<std::string> sections() const;
  // Key/value pairs of one section in file order.
  std::vector<std::pair<std::string, std::string>> entries(const std::string& section) const;

 private:
  boost::property_tree::ptree tree_;
};

}  // namespace agestack::report
