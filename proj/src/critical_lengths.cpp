#include "kdvlab/critical_lengths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kdvlab {

double critical_value(int k, int l) {
    const double kk = k;
    const double ll = l;
    return 2.0 * std::numbers::pi * std::sqrt((kk * kk + kk * ll + ll * ll) / 3.0);
}

std::vector<CriticalLength> critical_lengths_up_to(double L_max) {
    if (!(L_max > 0.0)) {
        throw std::invalid_argument("critical_lengths_up_to: L_max must be > 0");
    }
    // With k ≤ l, k² + kl + l² ≥ l², so l ≤ L_max·√3/(2π).
    const int bound = static_cast<int>(std::ceil(L_max * std::sqrt(3.0) / (2.0 * std::numbers::pi)));
    std::vector<CriticalLength> all;
    for (int k = 1; k <= bound; ++k) {
        for (int l = k; l <= bound; ++l) {
            const double v = critical_value(k, l);
            if (v <= L_max) all.push_back({v, k, l});
        }
    }
    std::sort(all.begin(), all.end(), [](const CriticalLength& x, const CriticalLength& y) {
        if (x.value != y.value) return x.value < y.value;
        return std::pair(x.k, x.l) < std::pair(y.k, y.l);
    });

    std::vector<CriticalLength> out;
    for (const auto& c : all) {
        if (!out.empty() && std::abs(c.value - out.back().value) <= 1e-12 * c.value) {
            if (std::pair(c.k, c.l) < std::pair(out.back().k, out.back().l)) out.back() = c;
            continue;
        }
        out.push_back(c);
    }
    return out;
}

CriticalCheck is_critical(double L, double tol) {
    if (!(L > 0.0)) {
        throw std::invalid_argument("is_critical: L must be > 0");
    }
    // Multiples of 2π are members, so [0, L + 2π] always contains one above L.
    const auto members = critical_lengths_up_to(L + 2.0 * std::numbers::pi);
    CriticalCheck best;
    best.distance = std::numeric_limits<double>::infinity();
    for (const auto& c : members) {
        const double d = std::abs(c.value - L);
        if (d < best.distance) {
            best.distance = d;
            best.nearest = c;
        }
    }
    best.critical = best.distance <= tol;
    return best;
}

}  // namespace kdvlab
