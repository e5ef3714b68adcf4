#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace syre::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FieldType { Integer, Real, Text, Boolean };

struct FieldSpec {
  FieldType type = FieldType::Real;
  std::string default_value;
  std::string help;
};

// Ordered so the resolved echo is deterministic.
using Schema = std::map<std::string, FieldSpec>;

// Flat `key = value` configuration with a typed schema. Unknown keys are
// rejected; missing keys take their defaults. Lines starting with '#' and
// blank lines are ignored.
class Config {
 public:
  Config(Schema schema, std::map<std::string, std::string> values);

  long get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  const std::string& get_text(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

  // fully-resolved `key = value` text; re-parsing it yields an equal config
  std::string serialize() const;
  const std::map<std::string, std::string>& values() const { return values_; }
  const Schema& schema() const { return schema_; }

  bool operator==(const Config& other) const { return values_ == other.values_; }

 private:
  void check_type(const std::string& key, const std::string& value) const;

  Schema schema_;
  std::map<std::string, std::string> values_;  // resolved, every schema key present
};

Config from_defaults(const Schema& schema);
Config parse_text(const std::string& text, const Schema& schema);
Config parse_file(const std::filesystem::path& path, const Schema& schema);

}  // namespace syre::config
