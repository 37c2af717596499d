#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace sedsim {

struct ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat typed key-value configuration: one `key = value` per line,
/// `#` starts a comment. Keys are dotted paths (grid.Nx, law.Ag, ...).
class ConfigMap {
  public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_text(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::optional<std::string> get(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }
    std::string serialize() const;

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace sedsim
