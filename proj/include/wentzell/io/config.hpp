#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

/// Flat `key = value` configuration. Later assignments override earlier ones,
/// so command-line `--set` entries applied after the file win.
class Config {
 public:
  static Config parse(std::istream& is) {
    Config c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (trim(line).empty()) continue;
      c.assign(line, lineno);
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open config file '" + path + "'");
    return parse(is);
  }

  /// Applies one `key=value` assignment.
  void assign(const std::string& kv, std::size_t lineno = 0) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value', got '" + kv + "'");
    const std::string key = trim(kv.substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "empty key");
    values_[key] = trim(kv.substr(eq + 1));
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("missing config key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(key, values_.at(key)) : fallback;
  }

  std::optional<double> get_optional_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return to_double(key, values_.at(key));
  }

  long get_int(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = values_.at(key);
    long r = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), r);
    if (ec != std::errc() || p != v.data() + v.size())
      throw InvalidArgument("config key '" + key + "': expected an integer, got '" + v + "'");
    return r;
  }

  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(values_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw InvalidArgument("config key '" + key + "': empty list");
    return out;
  }

  /// Keys starting with `prefix`, with the prefix stripped.
  std::map<std::string, std::string> with_prefix(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : values_)
      if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) out[k.substr(prefix.size())] = v;
    return out;
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  /// `# key = value` lines in key order.
  std::string header() const {
    std::string out;
    for (const auto& [k, v] : values_) out += "# " + k + " = " + v + "\n";
    return out;
  }

  /// Same content without the comment marker, for embedding in other formats.
  std::string lines() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static double to_double(const std::string& key, const std::string& v) {
    double r = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), r);
    if (ec != std::errc() || p != v.data() + v.size())
      throw InvalidArgument("config key '" + key + "': expected a number, got '" + v + "'");
    return r;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace wentzell
