#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kdvlab/config.hpp"

namespace kdvlab {

inline constexpr std::string_view kVersion = "0.1.0";

/// Identity of one run. The hash covers everything except the output directory and
/// the wall-clock time, so reruns with the same inputs stamp the same hash.
struct RunManifest {
    std::string subcommand;
    RunConfig config;
    std::map<std::string, std::string> options;  ///< subcommand-specific settings
    bool allow_critical = false;
    std::string output_dir;
    double wall_clock_seconds = 0.0;

    std::string canonical_text() const;
    std::string hash() const;      ///< FNV-1a 64 of canonical_text, 16 hex digits
    std::string file_text() const; ///< canonical text plus output_dir and wall clock
};

std::uint64_t fnv1a64(std::string_view data);

/// Command-line entry point (arguments without the program name). Exit codes:
/// 0 success, 1 domain error (message starts with the error name), 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const EnvLookup& env = nullptr);

}  // namespace kdvlab
