#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cilab {

/// Flat `key = value` configuration; `#` starts a comment.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  /// `key=value` override, as given on the command line.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  /// Comma- or space-separated list.
  std::vector<double> nums(const std::string& key) const;
  std::vector<double> nums(const std::string& key, std::vector<double> fallback) const;

  /// Canonical `key=value;...` text, sorted by key (used for fingerprints).
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cilab
