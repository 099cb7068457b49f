#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace obsloc {

/// Minimal TOML-style config reader covering what the tool configs need:
/// [section] headers (dotted allowed), key = value lines with strings,
/// booleans, integers, floats and flat arrays, and # comments. Keys are
/// stored flattened as "section.key".
class TomlTable {
 public:
  struct Value {
    std::variant<bool, long long, double, std::string, std::vector<Value>> v;
  };

  static TomlTable parse_file(const std::string& path);
  static TomlTable parse_string(const std::string& text, const std::string& origin = "<config>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key) const;  // integers promote
  double get_double(const std::string& key, double fallback) const;
  std::vector<double> get_double_array(const std::string& key) const;
  std::vector<double> get_double_array(const std::string& key, std::size_t expected) const;

  std::vector<std::string> keys() const;

 private:
  const Value& require(const std::string& key) const;

  std::map<std::string, Value> values_;
};

}  // namespace obsloc
