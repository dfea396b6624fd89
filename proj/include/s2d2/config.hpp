#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace s2d2 {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `section.key = value` text config. Unknown keys are hard errors so a
// typo in a threshold name cannot silently invalidate a sweep.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  // Throws ConfigError naming the first key not in `known` (sweep.<key> is
  // accepted for any sweepable key).
  void validate_keys(const std::set<std::string>& known,
                     const std::set<std::string>& sweepable) const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::uint64_t require_u64(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated value list (for sweep grids).
  std::vector<std::string> get_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

  int line_of(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

}  // namespace s2d2
