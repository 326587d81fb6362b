#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spw/weighting.hpp"

namespace spw {

/// Flat dotted-key configuration. Precedence: explicit set() (command line)
/// over load_file() over built-in defaults. Unknown keys are stored and
/// ignored by consumers.
class Config {
public:
    /// Full default table for the experiment pipeline.
    static Config defaults();

    /// key = value lines; blank lines and lines starting with '#' skipped.
    void load_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get(const std::string& key) const;
    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::uint64_t get_uint64(const std::string& key) const;
    Temperature get_temperature(const std::string& key) const;
    std::vector<std::string> get_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;
    std::vector<std::uint64_t> get_uint64_list(const std::string& key) const;

    /// Sorted key/value view for provenance output.
    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace spw
