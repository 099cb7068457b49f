#include "obsloc/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "obsloc/errors.hpp"

namespace obsloc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (const char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

[[noreturn]] void fail(const std::string& origin, int lineno, const std::string& message) {
  throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + message);
}

TomlTable::Value parse_scalar(const std::string& token, const std::string& origin, int lineno) {
  TomlTable::Value value;
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
    std::string s;
    for (std::size_t i = 1; i + 1 < token.size(); ++i) {
      char c = token[i];
      if (c == '\\' && i + 2 < token.size()) {
        const char next = token[++i];
        if (next == 'n') c = '\n';
        else if (next == 't') c = '\t';
        else c = next;  // \" and \\ and anything else literal
      }
      s += c;
    }
    value.v = s;
    return value;
  }
  if (token == "true") { value.v = true; return value; }
  if (token == "false") { value.v = false; return value; }

  bool integral = true;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (i == 0 && (c == '+' || c == '-')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) { integral = false; break; }
  }
  try {
    if (integral && !token.empty() && token != "+" && token != "-") {
      std::size_t pos = 0;
      const long long i = std::stoll(token, &pos);
      if (pos == token.size()) { value.v = i; return value; }
    }
    std::size_t pos = 0;
    const double d = std::stod(token, &pos);
    if (pos != token.size()) fail(origin, lineno, "cannot parse value '" + token + "'");
    value.v = d;
    return value;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(origin, lineno, "cannot parse value '" + token + "'");
  }
}

TomlTable::Value parse_value(const std::string& token, const std::string& origin, int lineno) {
  if (!token.empty() && token.front() == '[') {
    if (token.back() != ']') fail(origin, lineno, "unterminated array");
    std::vector<TomlTable::Value> items;
    const std::string inner = token.substr(1, token.size() - 2);
    std::string piece;
    bool in_string = false;
    for (const char c : inner) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        const std::string t = trim(piece);
        if (!t.empty()) items.push_back(parse_scalar(t, origin, lineno));
        piece.clear();
      } else {
        piece += c;
      }
    }
    const std::string t = trim(piece);
    if (!t.empty()) items.push_back(parse_scalar(t, origin, lineno));
    TomlTable::Value value;
    value.v = std::move(items);
    return value;
  }
  return parse_scalar(token, origin, lineno);
}

}  // namespace

TomlTable TomlTable::parse_string(const std::string& text, const std::string& origin) {
  TomlTable table;
  std::istringstream in(text);
  std::string raw;
  std::string prefix;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      const std::string section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      std::istringstream parts(section);
      std::string part;
      while (std::getline(parts, part, '.')) {
        if (!valid_key(trim(part))) fail(origin, lineno, "bad section name '" + section + "'");
      }
      prefix = section + ".";
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string token = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(origin, lineno, "bad key '" + key + "'");
    if (token.empty()) fail(origin, lineno, "missing value for key '" + key + "'");

    const std::string full = prefix + key;
    if (table.values_.count(full)) fail(origin, lineno, "duplicate key '" + full + "'");
    table.values_.emplace(full, parse_value(token, origin, lineno));
  }
  return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const TomlTable::Value& TomlTable::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config field '" + key + "'");
  return it->second;
}

std::string TomlTable::get_string(const std::string& key) const {
  const Value& value = require(key);
  if (const auto* s = std::get_if<std::string>(&value.v)) return *s;
  throw ConfigError("config field '" + key + "' must be a string");
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

bool TomlTable::get_bool(const std::string& key) const {
  const Value& value = require(key);
  if (const auto* b = std::get_if<bool>(&value.v)) return *b;
  throw ConfigError("config field '" + key + "' must be a boolean");
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

long long TomlTable::get_int(const std::string& key) const {
  const Value& value = require(key);
  if (const auto* i = std::get_if<long long>(&value.v)) return *i;
  throw ConfigError("config field '" + key + "' must be an integer");
}

long long TomlTable::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double TomlTable::get_double(const std::string& key) const {
  const Value& value = require(key);
  if (const auto* d = std::get_if<double>(&value.v)) return *d;
  if (const auto* i = std::get_if<long long>(&value.v)) return static_cast<double>(*i);
  throw ConfigError("config field '" + key + "' must be a number");
}

double TomlTable::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
  const Value& value = require(key);
  const auto* arr = std::get_if<std::vector<Value>>(&value.v);
  if (!arr) throw ConfigError("config field '" + key + "' must be an array");
  std::vector<double> out;
  out.reserve(arr->size());
  for (const Value& item : *arr) {
    if (const auto* d = std::get_if<double>(&item.v)) out.push_back(*d);
    else if (const auto* i = std::get_if<long long>(&item.v)) out.push_back(static_cast<double>(*i));
    else throw ConfigError("config field '" + key + "' must hold numbers");
  }
  return out;
}

std::vector<double> TomlTable::get_double_array(const std::string& key,
                                                std::size_t expected) const {
  auto out = get_double_array(key);
  if (out.size() != expected)
    throw ConfigError("config field '" + key + "' must hold " + std::to_string(expected) +
                      " numbers, found " + std::to_string(out.size()));
  return out;
}

std::vector<std::string> TomlTable::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [key, value] : values_) out.push_back(key);
  return out;
}

}  // namespace obsloc
