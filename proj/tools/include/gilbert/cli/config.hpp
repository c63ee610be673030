#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gilbert/geometry.hpp"

namespace gilbert::cli {

/// Invalid configuration or command line; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value configuration. Values stay text until a typed getter reads
/// them, so a manifest echoes exactly what was supplied.
class Config {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.contains(key); }
  void merge(const Config& over);

  std::string text(const std::string& key) const;
  double real(const std::string& key) const;
  double positive(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma separated
  Point2 point(const std::string& key) const;               // "x,y"
  Direction direction(const std::string& key) const;        // H or V
  Side side(const std::string& key) const;                  // + or -

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Lines `key = value`; blank lines and lines starting with '#' are ignored.
Config parse_config(std::istream& in, const std::string& source = "<config>");
Config load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const Config& config);

}  // namespace gilbert::cli
