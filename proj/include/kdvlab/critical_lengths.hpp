#pragma once

#include <vector>

#include "kdvlab/errors.hpp"

namespace kdvlab {

/// 2π·sqrt((k² + k·l + l²)/3).
double critical_value(int k, int l);

/// All critical lengths ≤ L_max with k,l ≥ 1, sorted ascending. Values that coincide
/// within 1e-12 relative tolerance are reported once, with the lexicographically
/// smallest (k,l).
std::vector<CriticalLength> critical_lengths_up_to(double L_max);

struct CriticalCheck {
    bool critical = false;
    CriticalLength nearest;
    double distance = 0.0;
};

/// Nearest member of the critical set to L and whether it lies within tol.
CriticalCheck is_critical(double L, double tol);

}  // namespace kdvlab
