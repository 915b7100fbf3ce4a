#include "kdvlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kdvlab/differences.hpp"
#include "kdvlab/errors.hpp"

namespace kdvlab {
namespace {

double sin_half_L(double L) {
    const double s = std::sin(L / 2.0);
    if (std::abs(s) < kSingularProfileTol) {
        std::ostringstream os;
        os.precision(17);
        os << "sin(L/2) = " << s << " for L = " << L;
        throw DomainError(ErrorCode::SingularProfile, os.str());
    }
    return s;
}

double shape(double x, double L) { return std::sin(x / 2.0) * std::sin((L - x) / 2.0); }

double simpson(const std::function<double(double)>& g, double L, int panels) {
    const double h = L / panels;
    double sum = g(0.0) + g(L);
    for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * g(i * h);
    return sum * h / 3.0;
}

double refined_simpson(const std::function<double(double)>& g, double L) {
    int panels = 64;
    double coarse = simpson(g, L, panels);
    for (int iter = 0; iter < 12; ++iter) {
        panels *= 2;
        const double fine = simpson(g, L, panels);
        const double estimate = (fine - coarse) / 15.0;
        if (std::abs(estimate) <= 1e-13 * std::max(std::abs(fine), 1e-300)) return fine + estimate;
        coarse = fine;
    }
    return coarse;
}

double max_interior_residual(const std::vector<double>& v, double h) {
    const auto d1 = fd::nodal_derivative(v, h, 1);
    const auto d3 = fd::nodal_derivative(v, h, 3);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) worst = std::max(worst, std::abs(d1[i] + d3[i]));
    return worst;
}

}  // namespace

double eval_M(double x, double c, double L) { return 2.0 * c * shape(x, L) / sin_half_L(L); }

double eval_f(double x, double a, double L) { return 2.0 * a * shape(x, L) / sin_half_L(L); }

double eval_steady_h(double x, double a, double L, double z) { return -eval_f(x, a, L) * z; }

ProfileSample sample_profile(const Grid& grid, ProfileKind kind, double gain, double z) {
    const double L = grid.length();
    ProfileSample s{grid, std::vector<double>(static_cast<std::size_t>(grid.intervals()) + 1, 0.0), kind};
    for (int i = 1; i < grid.intervals(); ++i) {
        const double x = grid.node(i);
        switch (kind) {
            case ProfileKind::M: s.values[i] = eval_M(x, gain, L); break;
            case ProfileKind::F: s.values[i] = eval_f(x, gain, L); break;
            case ProfileKind::SteadyH: s.values[i] = eval_steady_h(x, gain, L, z); break;
        }
    }
    return s;
}

double coupling_constant_K(double a, double c, double L) {
    const double s = sin_half_L(L);
    if (a == 0.0 || c == 0.0) return 0.0;
    const double integral = refined_simpson([L](double x) { return shape(x, L) * shape(x, L); }, L);
    return 4.0 * a * c * integral / (s * s);
}

double norm_sq_M(double c, double L) { return coupling_constant_K(c, c, L); }

ProfileResiduals profile_residuals(const Grid& grid, double c) {
    const auto M = sample_profile(grid, ProfileKind::M, c).values;
    const double h = grid.spacing();
    return {max_interior_residual(M, h), fd::left_slope(M, h), fd::right_slope(M, h)};
}

double steady_profile_residual(const Grid& grid, double a) {
    return max_interior_residual(sample_profile(grid, ProfileKind::F, a).values, grid.spacing());
}

}  // namespace kdvlab
