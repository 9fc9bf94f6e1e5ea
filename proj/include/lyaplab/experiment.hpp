#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "lyaplab/geometry.hpp"
#include "lyaplab/rds.hpp"

namespace lyaplab {

/// Flat key-value experiment configuration with dotted sections, e.g.
///   system.kind = standard
///   system.K = 1.0
///   noise.kind = uniform_ball
/// Unknown keys are rejected before any computation so that every artifact
/// is reproducible from (config, seed) alone.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    void set(const std::string& key, const std::string& value);

    /// Throws ConfigError naming the first key outside `allowed`.
    void require_known(const std::set<std::string>& allowed) const;

    /// Sorted "key=value" lines; the config hash is FNV-1a over this text.
    std::string canonical() const;
    std::uint64_t hash() const;

private:
    std::map<std::string, std::string> kv_;
};

/// Keys understood by the experiment runners.
const std::set<std::string>& known_config_keys();

/// Build the random system described by system.* and noise.* keys.
RandomSystem system_from_config(const Config& cfg);

/// Build just the table for billiard systems (diagnostics, classify).
Table table_from_config(const Config& cfg);

NoiseModel noise_from_config(const Config& cfg);

// Runners return the full artifact text (CSV or structured text); every
// artifact embeds the config hash and seed.  All runners are deterministic
// functions of the config, independent of worker count.
std::string run_lyapunov(const Config& cfg);
std::string run_orbit(const Config& cfg);
std::string run_projective(const Config& cfg);
std::string run_classify(const Config& cfg);
std::string run_equidist(const Config& cfg);
std::string run_dichotomy(const Config& cfg);

} // namespace lyaplab
