#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elid/symbolic/diff_expr.hpp"

namespace elid::app {

/// Malformed or inadmissible input; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigKey {
  std::string_view key;
  std::string_view fallback;
  std::string_view doc;
};

/// Every recognized key with its default.
const std::vector<ConfigKey>& config_schema();

/// Flat `key = value` settings with dotted section prefixes. Lines starting with '#' are
/// comments; unknown keys and repeated keys are rejected.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  static ExperimentConfig parse(std::string_view text, const std::string& origin = "<config>");
  static ExperimentConfig load(const std::string& path);

  /// Overrides one key (command-line flags go through here).
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value".
  void set_assignment(const std::string& assignment);

  [[nodiscard]] bool is_set(const std::string& key) const { return values_.count(key) != 0; }
  /// Explicit value or the schema default.
  [[nodiscard]] std::string get(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] long get_int(const std::string& key) const;
  [[nodiscard]] std::uint64_t get_seed() const;
  [[nodiscard]] bool get_bool(const std::string& key) const;
  [[nodiscard]] sym::Rational get_rational(const std::string& key) const;
  /// Comma-separated list; empty value gives an empty list.
  [[nodiscard]] std::vector<double> get_list(const std::string& key) const;
  [[nodiscard]] std::vector<sym::Rational> get_rational_list(const std::string& key) const;

  /// Every schema key with its effective value, sorted, in the input syntax.
  [[nodiscard]] std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace elid::app
