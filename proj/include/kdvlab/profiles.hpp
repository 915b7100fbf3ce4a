#pragma once

#include <vector>

#include "kdvlab/core.hpp"

namespace kdvlab {

/// Below this |sin(L/2)| the closed-form profiles are treated as singular.
inline constexpr double kSingularProfileTol = 1e-10;

/// M(x) = 2c·sin(x/2)·sin((L-x)/2) / sin(L/2), the multiplier in V₁.
double eval_M(double x, double c, double L);
/// f(x) = 2a·sin(x/2)·sin((L-x)/2) / sin(L/2). f(0) = f(L) = 0, f'(0) = a, f'(L) = -a.
double eval_f(double x, double a, double L);
/// Quasi-steady KdV profile h(x) = -f(x)·z, which satisfies h' + h''' = 0, h_x(L) = a z.
double eval_steady_h(double x, double a, double L, double z);

enum class ProfileKind { M, F, SteadyH };

struct ProfileSample {
    Grid grid;
    std::vector<double> values;
    ProfileKind kind;
};

/// Nodal samples; gain is c for M and a for F/SteadyH. z is only used for SteadyH.
ProfileSample sample_profile(const Grid& grid, ProfileKind kind, double gain, double z = 1.0);

/// K = ∫₀ᴸ M(x) f(x) dx by composite Simpson with doubling until the Richardson
/// error estimate is below 1e-13 relative.
double coupling_constant_K(double a, double c, double L);

/// ∫₀ᴸ M(x)² dx, same quadrature as coupling_constant_K.
double norm_sq_M(double c, double L);

struct ProfileResiduals {
    double bvp_residual = 0.0;  ///< max over interior nodes of |M''' + M'| (discrete)
    double left_trace = 0.0;    ///< one-sided M'(0); the closed form gives +c
    double right_trace = 0.0;   ///< one-sided M'(L); the closed form gives -c
};

ProfileResiduals profile_residuals(const Grid& grid, double c);

/// Max over interior nodes of |f' + f'''| for the discrete f (same stencils as above).
double steady_profile_residual(const Grid& grid, double a);

}  // namespace kdvlab
