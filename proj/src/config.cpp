#include "syre/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace syre::config {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_long(const std::string& s, long& out) {
  char* end = nullptr;
  out = std::strtol(s.c_str(), &end, 10);
  return end != s.c_str() && *end == '\0';
}

bool parse_double(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

}  // namespace

Config::Config(Schema schema, std::map<std::string, std::string> values)
    : schema_(std::move(schema)) {
  for (const auto& [key, value] : values) {
    if (!schema_.count(key)) {
      throw ConfigError("unknown config key: " + key);
    }
    check_type(key, value);
  }
  for (const auto& [key, spec] : schema_) {
    auto it = values.find(key);
    values_[key] = it != values.end() ? it->second : spec.default_value;
  }
}

void Config::check_type(const std::string& key, const std::string& value) const {
  const FieldSpec& spec = schema_.at(key);
  switch (spec.type) {
    case FieldType::Integer: {
      long dummy;
      if (!parse_long(value, dummy)) {
        throw ConfigError("config key " + key + " expects an integer, got '" + value + "'");
      }
      break;
    }
    case FieldType::Real: {
      double dummy;
      if (!parse_double(value, dummy)) {
        throw ConfigError("config key " + key + " expects a real, got '" + value + "'");
      }
      break;
    }
    case FieldType::Boolean:
      if (value != "true" && value != "false") {
        throw ConfigError("config key " + key + " expects true/false, got '" + value + "'");
      }
      break;
    case FieldType::Text:
      break;
  }
}

long Config::get_int(const std::string& key) const {
  long out;
  if (!parse_long(values_.at(key), out)) throw ConfigError("bad integer for key " + key);
  return out;
}

double Config::get_real(const std::string& key) const {
  double out;
  if (!parse_double(values_.at(key), out)) throw ConfigError("bad real for key " + key);
  return out;
}

const std::string& Config::get_text(const std::string& key) const { return values_.at(key); }

bool Config::get_bool(const std::string& key) const { return values_.at(key) == "true"; }

void Config::set(const std::string& key, const std::string& value) {
  if (!schema_.count(key)) throw ConfigError("unknown config key: " + key);
  check_type(key, value);
  values_[key] = value;
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) {
    out << key << " = " << value << '\n';
  }
  return out.str();
}

Config from_defaults(const Schema& schema) { return Config(schema, {}); }

Config parse_text(const std::string& text, const Schema& schema) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
    }
    if (values.count(key)) {
      throw ConfigError("duplicate config key: " + key);
    }
    values[key] = value;
  }
  return Config(schema, std::move(values));
}

Config parse_file(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), schema);
}

}  // namespace syre::config
