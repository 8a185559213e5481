#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sieformer {

// Flat sectioned key-value document:
//   [section]
//   key = value
// Full-line # comments and blank lines are ignored. Duplicate sections or
// keys are rejected (they hide config drift). serialize() is canonical
// (sorted sections/keys), so parse(serialize(c)) round-trips exactly.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text);      // throws ConfigError
  static KvConfig load(const std::string& path);       // throws IoError too
  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  // Typed getters: the *_or forms fall back when the key is absent, the
  // plain forms require it. Malformed values always throw ConfigError.
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;

  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;

  // Drift guards: every present key/section must be in the allowed list.
  void require_known_keys(const std::string& section,
                          const std::vector<std::string>& allowed) const;
  void require_known_sections(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace sieformer
