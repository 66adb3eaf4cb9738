#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "permsym/model_spec.hpp"

namespace permsym {

/// Bad config text or value; line is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& key, const std::string& what);

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

/**
 * Flat key-value config: one `key = value` per line, `#` starts a comment,
 * blank lines ignored, keys unique.
 */
class Config {
public:
    struct Entry {
        std::string value;
        int line;
    };

    static Config parse(std::istream& in, std::string source = "<config>");
    static Config load(const std::filesystem::path& path);

    const std::string& source() const noexcept { return source_; }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const Entry* find(const std::string& key) const;
    /// Adds or replaces a key (line 0), used for sweeps and command-line overrides.
    void set(const std::string& key, std::string value);
    const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

/// Everything one run needs: the model plus integrator, check and output settings.
struct RunConfig {
    ModelSpec spec;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::size_t positivity_samples = 10;
    double leakage_threshold = 1e-6;
    bool oracle = false;
    bool strict = false;
    bool center_blocks = true;
    std::vector<std::string> observables;  // empty selects all
    std::string output_dir = ".";
};

/// Recognised keys, in the order they appear in resolved listings.
const std::vector<std::string>& config_keys();

/// Applies defaults for the model kind and emitter count, then the given keys. Throws ConfigError.
RunConfig resolve(const Config& config);

/// Every resolved setting as `key = value` text pairs, enough to reproduce the run.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& run);

}  // namespace permsym
