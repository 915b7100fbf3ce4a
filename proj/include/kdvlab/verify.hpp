#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kdvlab {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast built-in property suite: profile residual orders, MMS orders in both regimes,
/// the discrete energy balance, norm-equivalence sandwiches and the critical-length
/// spectrum. Each check catches its own exceptions and reports them as failures.
std::vector<CheckResult> run_verification(std::uint64_t seed = 1);

}  // namespace kdvlab
