#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kdvlab/core.hpp"

namespace kdvlab {

inline constexpr int kDefaultDimensionCap = 600;

/// Dense semi-discrete generator on (y[1..n-1], z); last row and column belong to z.
struct GeneratorMatrix {
    Eigen::MatrixXd matrix;
    SystemParams params;
    Grid grid;

    int dimension() const { return static_cast<int>(matrix.rows()); }
};

/// Regime scaling is applied (1/ε on the y rows in FastKdv, on the z row in FastOde).
/// Params are validated unless allow_critical is set; ε > 0 and L > 0 are always required.
GeneratorMatrix assemble_generator(const SystemParams& params, const Grid& grid, bool allow_critical = false);

/// KdV block alone: -(∂x + ∂x³) with y(0) = y(L) = 0, y_x(L) = 0.
Eigen::MatrixXd kdv_block(const Grid& grid);

/// Full eigenvalue set. Throws DimensionCap and EigenFailure.
std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& matrix, int cap = kDefaultDimensionCap);

/// Largest real part of the spectrum. Throws DimensionCap and EigenFailure.
double spectral_abscissa(const Eigen::MatrixXd& matrix, int cap = kDefaultDimensionCap);
inline double spectral_abscissa(const GeneratorMatrix& G, int cap = kDefaultDimensionCap) {
    return spectral_abscissa(G.matrix, cap);
}

/// Discrete inner product h·Σ y_i u_i + z·w on the generator's coordinates.
double state_dot(const GeneratorMatrix& G, const Eigen::VectorXd& x, const Eigen::VectorXd& u);

/// 2⟨Gx, x⟩ - C‖x‖² (the un-halved derivative of ‖x‖² against the bound C‖x‖²).
double form_slack(const GeneratorMatrix& G, const Eigen::VectorXd& x, double C);

/// Random smooth state in the operator's domain: Σ_k c_k sin(kπx/L)·sin(πx/L) - f(x)·z,
/// normalized to unit discrete norm.
Eigen::VectorXd random_domain_state(const GeneratorMatrix& G, std::uint64_t seed);

/// Worst form_slack over the unit z-direction followed by `trials` random domain states.
double quadratic_form_bound(const GeneratorMatrix& G, int trials, double C, std::uint64_t seed = 1);

/// 2a² + 2b + 8c² clipped at zero.
double dissipativity_constant(double a, double b, double c);

}  // namespace kdvlab
