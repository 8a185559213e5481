#include "sieformer/kvconfig.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "config line %zu: %s", line, what.c_str());
  throw ConfigError(buf);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!(std::islower(static_cast<unsigned char>(ch)) ||
          std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) {
      return false;
    }
  }
  return true;
}

}  // namespace

KvConfig KvConfig::parse(const std::string& text) {
  KvConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') parse_error(lineno, "unterminated section header");
      std::string name = trim(s.substr(1, s.size() - 2));
      if (!valid_name(name)) parse_error(lineno, "bad section name '" + name + "'");
      if (config.data_.count(name)) {
        parse_error(lineno, "duplicate section '" + name + "'");
      }
      config.data_[name];
      section = name;
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) parse_error(lineno, "expected key = value");
    if (section.empty()) parse_error(lineno, "key before any [section]");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) parse_error(lineno, "bad key name '" + key + "'");
    if (value.empty()) parse_error(lineno, "empty value for '" + key + "'");
    auto& sec = config.data_[section];
    if (sec.count(key)) {
      parse_error(lineno, "duplicate key '" + key + "' in [" + section + "]");
    }
    sec.emplace(key, value);
  }
  return config;
}

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string KvConfig::serialize() const {
  std::string out;
  bool first = true;
  for (const auto& [section, entries] : data_) {
    if (!first) out += "\n";
    first = false;
    out += "[" + section + "]\n";
    for (const auto& [key, value] : entries) {
      out += key + " = " + value + "\n";
    }
  }
  return out;
}

bool KvConfig::has(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  return it != data_.end() && it->second.count(key) > 0;
}

void KvConfig::set(const std::string& section, const std::string& key,
                   const std::string& value) {
  if (!valid_name(section) || !valid_name(key) || value.empty()) {
    throw ConfigError("set: bad section/key/value");
  }
  data_[section][key] = value;
}

std::string KvConfig::get_string(const std::string& section,
                                 const std::string& key) const {
  auto it = data_.find(section);
  if (it == data_.end() || !it->second.count(key)) {
    throw ConfigError("missing config key [" + section + "] " + key);
  }
  return it->second.at(key);
}

std::string KvConfig::get_string_or(const std::string& section,
                                    const std::string& key,
                                    const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double KvConfig::get_double_or(const std::string& section, const std::string& key,
                               double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(raw.c_str(), &end);
  if (errno != 0 || end != raw.c_str() + raw.size() || !std::isfinite(v)) {
    throw ConfigError("[" + section + "] " + key + ": expected a finite number, got '" +
                      raw + "'");
  }
  return v;
}

std::uint64_t KvConfig::get_u64_or(const std::string& section, const std::string& key,
                                   std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get_string(section, key);
  if (raw.empty() || raw[0] == '-' || raw[0] == '+') {
    throw ConfigError("[" + section + "] " + key + ": expected an unsigned integer");
  }
  errno = 0;
  char* end = nullptr;
  std::uint64_t v = std::strtoull(raw.c_str(), &end, 10);
  if (errno != 0 || end != raw.c_str() + raw.size()) {
    throw ConfigError("[" + section + "] " + key +
                      ": expected an unsigned integer, got '" + raw + "'");
  }
  return v;
}

bool KvConfig::get_bool_or(const std::string& section, const std::string& key,
                           bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get_string(section, key);
  if (raw == "true" || raw == "1") return true;
  if (raw == "false" || raw == "0") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true/false, got '" + raw +
                    "'");
}

std::vector<std::string> KvConfig::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) out.push_back(name);
  return out;
}

std::vector<std::string> KvConfig::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto it = data_.find(section);
  if (it == data_.end()) return out;
  for (const auto& [key, _] : it->second) out.push_back(key);
  return out;
}

void KvConfig::require_known_keys(const std::string& section,
                                  const std::vector<std::string>& allowed) const {
  auto it = data_.find(section);
  if (it == data_.end()) return;
  for (const auto& [key, _] : it->second) {
    bool known = false;
    for (const auto& a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

void KvConfig::require_known_sections(const std::vector<std::string>& allowed) const {
  for (const auto& [section, _] : data_) {
    bool known = false;
    for (const auto& a : allowed) {
      if (section == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config section [" + section + "]");
  }
}

}  // namespace sieformer
