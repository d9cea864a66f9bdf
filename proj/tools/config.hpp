#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcf::cli {

/// Bad flags, bad config values, missing files. Exit code 3.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value settings. Later sources override earlier ones.
class Config {
 public:
  /// '#' starts a comment; blank lines are ignored.
  static Config parse(const std::string& text, const std::string& origin = "config");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Comma-separated reals; "a/b" fractions are accepted.
  std::vector<double> reals(const std::string& key) const;
  /// "42", "1-10" or "1,4,9".
  std::vector<std::uint64_t> seeds(const std::string& key, std::uint64_t fallback) const;

  /// Rejects keys outside `allowed`.
  void restrict_to(const std::vector<std::string>& allowed) const;

  /// FNV-1a over the sorted key=value lines, skipping keys that only pick
  /// output locations or worker counts.
  std::string digest() const;

 private:
  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& text, const std::string& what);

}  // namespace gcf::cli
