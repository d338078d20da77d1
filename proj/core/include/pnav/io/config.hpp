#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace pnav::io {

/// Flat `key = value` text config. Lines starting with '#' are comments.
/// Unknown keys are kept (callers may probe); typed getters throw
/// ConfigError on malformed values.
class Config {
public:
  Config() = default;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string serialize() const;

private:
  std::map<std::string, std::string> entries_;
};

}  // namespace pnav::io
