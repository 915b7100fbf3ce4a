#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kdvlab/core.hpp"

namespace kdvlab {

/// Resolved run configuration. Sources, lowest precedence first: built-in defaults,
/// the key=value config file, KDVLAB_<KEY> environment variables, command-line flags.
struct RunConfig {
    SystemParams params{0.1, -1.0, 1.0, 0.1, 3.0, Regime::FastKdv};
    int n = 200;
    double dt = 0.005;
    double T = 1.0;
    int snapshot_stride = 0;
    double weight_beta = 0.0;  ///< 0 selects the uniform weight
    std::uint64_t seed = 1;
    std::string disturbance = "none";  ///< none | mms | file
    std::string disturbance_file;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Config keys in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one key from text. Throws DomainError(InvalidConfig) naming the valid keys.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Parses "key = value" lines; '#' starts a comment. Throws DomainError(InvalidConfig).
void apply_config_text(RunConfig& config, std::string_view text, std::string_view origin = "config");
void apply_config_file(RunConfig& config, const std::string& path);

/// Applies KDVLAB_<KEY> variables (key upper-cased, e.g. KDVLAB_EPSILON, KDVLAB_L).
using EnvLookup = std::function<const char*(const char*)>;
void apply_environment(RunConfig& config, const EnvLookup& lookup);
std::string env_name(std::string_view key);

/// Canonical text of one value (shortest round-trip form for reals).
std::string format_value(const RunConfig& config, std::string_view key);
std::string format_real(double value);

/// key → canonical value for every key.
std::map<std::string, std::string> resolved(const RunConfig& config);

}  // namespace kdvlab
