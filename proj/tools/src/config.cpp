#include "gilbert/cli/config.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "gilbert/format.hpp"

namespace gilbert::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void Config::merge(const Config& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

std::string Config::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("missing configuration key '" + key + "'");
  return it->second;
}

double Config::real(const std::string& key) const {
  try {
    return parse_double(text(key));
  } catch (const std::invalid_argument&) {
    throw UsageError("'" + key + "' must be a number, got '" + text(key) + "'");
  }
}

double Config::positive(const std::string& key) const {
  const double v = real(key);
  if (!(v > 0.0)) throw UsageError("'" + key + "' must be positive");
  return v;
}

long long Config::integer(const std::string& key) const {
  try {
    return parse_integer(text(key));
  } catch (const std::invalid_argument&) {
    throw UsageError("'" + key + "' must be an integer, got '" + text(key) + "'");
  }
}

std::uint64_t Config::seed(const std::string& key) const {
  const std::string t = text(key);
  try {
    std::size_t used = 0;
    const auto v = std::stoull(t, &used, 10);
    if (used != t.size() || t.front() == '-') throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' must be a non-negative 64-bit integer, got '" + t + "'");
  }
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  const std::string t = text(key);
  try {
    for (auto f : split_csv(t)) out.push_back(parse_double(trim(f)));
  } catch (const std::invalid_argument&) {
    throw UsageError("'" + key + "' must be a comma-separated list of numbers, got '" + t + "'");
  }
  return out;
}

Point2 Config::point(const std::string& key) const {
  const auto v = reals(key);
  if (v.size() != 2) throw UsageError("'" + key + "' must be a point x,y");
  return {v[0], v[1]};
}

Direction Config::direction(const std::string& key) const {
  try {
    return parse_direction(text(key));
  } catch (const std::invalid_argument& e) {
    throw UsageError("'" + key + "': " + e.what());
  }
}

Side Config::side(const std::string& key) const {
  const std::string t = text(key);
  if (t == "+" || t == "plus") return Side::Plus;
  if (t == "-" || t == "minus") return Side::Minus;
  throw UsageError("'" + key + "' must be + or -, got '" + t + "'");
}

Config parse_config(std::istream& in, const std::string& source) {
  Config c;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw UsageError(source + ":" + std::to_string(row) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (key.empty()) throw UsageError(source + ":" + std::to_string(row) + ": empty key");
    c.set(key, trim(std::string_view(s).substr(eq + 1)));
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  return parse_config(in, path.string());
}

void write_config(std::ostream& out, const Config& config) {
  for (const auto& [k, v] : config.values()) out << k << '=' << v << '\n';
}

}  // namespace gilbert::cli
