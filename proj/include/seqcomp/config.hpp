#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace seqcomp {

// Flat "key = value" config file; '#' comments, blank lines ignored.
// CLI flags override file values.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig read_file(const std::string& path);
  static KeyValueConfig parse(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  std::string origin_;
};

}  // namespace seqcomp
