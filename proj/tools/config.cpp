#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sgdlab/core.hpp"

namespace sgdlab::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"", {"seed", "name"}},
      {"landscape",
       {"kind", "form", "dim", "minima", "weights", "sigmas", "c", "lscale", "wscale", "hessian", "center",
        "offset"}},
      {"shift", {"value", "stddev_shift"}},
      {"diffusion", {"kind", "d", "shape", "beta2"}},
      {"domain", {"lo", "hi"}},
      {"temperatures", {"lo", "hi", "count", "values"}},
      {"methods", {"list"}},
      {"quadrature", {"grid_n", "minima_grid_n", "threads"}},
      {"sgd", {"learning_rate", "batch_size", "temperature", "steps", "burn_in", "chains", "thin", "bins", "init"}},
      {"fp", {"temperature", "cells", "dt", "t_end", "snapshot_interval", "init_mean", "init_std"}},
      {"probe", {"n", "margin", "window"}},
      {"reparam", {"family", "scale", "amp", "temperature"}},
      {"validate", {"probes", "inject_rotation", "curl_grid_n"}},
      {"output", {"dir", "density_temperatures"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(t.c_str(), &end);
  return errno == 0 && end == t.c_str() + t.size();
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  const auto& known = schema();
  auto fail = [&](const std::string& msg) { throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail("malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!known.count(section) || section.empty()) fail("unknown section [" + section + "]");
      if (cfg.sections_.count(section)) fail("duplicate section [" + section + "]");
      cfg.sections_[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (!known.at(section).count(key)) {
      fail("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
    }
    if (value.empty()) fail("empty value for '" + key + "'");
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) fail("duplicate key '" + key + "'");
    sec[key] = Entry{value, line};
  }
  if (!cfg.has("", "seed")) throw ConfigError(origin + ": missing mandatory key 'seed'");
  cfg.get_u64("", "seed");
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key);
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

std::string Config::where(const std::string& section, const std::string& key) const {
  std::string s = origin_;
  if (has(section, key)) s += ":" + std::to_string(sections_.at(section).at(key).line);
  s += ": ";
  if (!section.empty()) s += "[" + section + "] ";
  return s + key;
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError(where(section, key) + " is required");
  return sections_.at(section).at(key);
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  double v = 0;
  if (!parse_double(entry(section, key).value, v)) throw ConfigError(where(section, key) + ": expected a number");
  return v;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
  const std::string& s = entry(section, key).value;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) throw ConfigError(where(section, key) + ": expected an integer");
  return v;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key) const {
  const std::string& s = entry(section, key).value;
  char* end = nullptr;
  errno = 0;
  if (s.empty() || s.front() == '-') throw ConfigError(where(section, key) + ": expected an unsigned integer");
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size())
    throw ConfigError(where(section, key) + ": expected an unsigned integer");
  return static_cast<std::uint64_t>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& s = entry(section, key).value;
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(where(section, key) + ": expected true or false");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
  std::string s = entry(section, key).value;
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError(where(section, key) + ": unbalanced brackets");
    s = s.substr(1, s.size() - 2);
  }
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0;
    if (!parse_double(tok, v)) throw ConfigError(where(section, key) + ": bad list element '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(where(section, key) + ": empty list");
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  if (!schema().count(section) || !schema().at(section).count(key)) {
    throw ConfigError("cannot override unknown key " + key);
  }
  sections_[section][key] = Entry{value, 0};
}

}  // namespace sgdlab::cli
