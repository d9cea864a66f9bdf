#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcflow/inequalities.hpp"

namespace gcf::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("bad seed '" + text + "'");
  return std::stoull(text);
}

const char* const kUnhashed[] = {"out_dir", "output", "workers", "config"};

}  // namespace

double parse_real(const std::string& text, const std::string& what) {
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return parse_real(text.substr(0, slash), what) / parse_real(text.substr(slash + 1), what);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw UsageError("bad number '" + text + "' for " + what);
  return v;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) throw UsageError(origin + ":" + std::to_string(lineno) + ": empty key");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::real(const std::string& key, double fallback) const {
  return has(key) ? parse_real(values_.at(key), key) : fallback;
}

long Config::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const auto& s = values_.at(key);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("bad integer '" + s + "' for " + key);
  return v;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& s = values_.at(key);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw UsageError("bad boolean '" + s + "' for " + key);
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  for (const auto& item : split(values_.at(key), ','))
    if (!item.empty()) out.push_back(parse_real(item, key));
  return out;
}

std::vector<std::uint64_t> Config::seeds(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return {fallback};
  std::vector<std::uint64_t> out;
  for (const auto& item : split(values_.at(key), ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_seed(item));
      continue;
    }
    const auto lo = parse_seed(trim(item.substr(0, dash)));
    const auto hi = parse_seed(trim(item.substr(dash + 1)));
    if (hi < lo || hi - lo > 1'000'000) throw UsageError("bad seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw UsageError("empty seed list");
  return out;
}

void Config::restrict_to(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : values_)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw UsageError("unknown setting '" + k + "'");
}

std::string Config::digest() const {
  std::string canon;
  for (const auto& [k, v] : values_) {
    if (std::find(std::begin(kUnhashed), std::end(kUnhashed), k) != std::end(kUnhashed)) continue;
    canon += k + "=" + v + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(canon.data(), canon.size())));
  return buf;
}

}  // namespace gcf::cli
