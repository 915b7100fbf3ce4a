#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kdvlab/core.hpp"
#include "kdvlab/lyapunov.hpp"

namespace kdvlab {

/// b - ac < 0
bool predicate_thm1(double a, double b, double c);

struct Prop1Roots {
    double alpha = 0.0;
    bool distinct = false;  ///< a² < α/(4κ₂)
    double x1 = 0.0;
    double x2 = 0.0;
};

/// α = λ/(2‖M‖²ε²) and the roots of X²/α - X + κ₂a². Throws ZeroLambda.
Prop1Roots prop1_roots(double a, double eps, const ConstantsRegistry& registry, double M_norm_sq);
/// X₁ < -(b - ac) < X₂ with two distinct roots. Throws ZeroLambda.
bool predicate_prop1(double a, double b, double c, double eps, const ConstantsRegistry& registry, double M_norm_sq);
/// b < 0 and a²c²/b² < κ₃/(4κ₂)
bool predicate_prop2(double a, double b, double c, const ConstantsRegistry& registry);
/// b < 0 and a²c²/b² < κ₃/κ₂
bool predicate_thm2(double a, double b, double c, const ConstantsRegistry& registry);
/// b < 0 and a²c²/b² < κ₃/(44κ₂ε²)
bool predicate_tikh2(double a, double b, double c, double eps, const ConstantsRegistry& registry);

/// log(err) = slope·log(eps) + intercept by least squares.
struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
PowerFit fit_power_law(const std::vector<double>& eps, const std::vector<double>& errors);

/// sin(2πk x/L)·x(L-x)/L² scaled to unit L² norm on [0, L].
std::function<double(double)> bump_shape(int k, double L);

/// Shapes scaled by the ε-powers of the Tikhonov statements; ζ is the scalar shape.
struct BaseShapes {
    std::function<double(double)> y_hat;
    std::function<double(double)> y_bar;
    double zeta_hat = 1.0;
    double zeta_bar = 1.0;
};
/// ŷ-shape with k = 1, ȳ-shape (ψ) with k = 2, ζ = 1.
BaseShapes default_base_shapes(double L);

/// dt = min(ε, 1)·fraction
struct DtRule {
    double fraction = 1.0 / 20.0;
    double operator()(double eps) const;
};

/// ẑ = z - z̄(t), ŷ = y + f·z̄(t) - ȳ(t/ε)
struct ErrorStateR1 {
    double t = 0.0;
    double z_hat = 0.0;
    std::vector<double> y_hat;

    double norm(const Grid& grid) const;  ///< ‖ŷ‖ + |ẑ|
};
ErrorStateR1 assemble_error_r1(const CoupledState& full, double z_bar, std::span<const double> y_bar_stretched,
                               const SystemParams& params, const Grid& grid);

/// ẑ = z + (c/b)y_x(0) - z̄(t/ε), ŷ = y - ȳ(t), v̂ = v - v̄
struct ErrorStateR2 {
    double t = 0.0;
    double z_hat = 0.0;
    std::vector<double> y_hat;
    std::vector<double> v_hat;

    double norm(const Grid& grid) const;  ///< H³ surrogate of ŷ + |ẑ|
};
ErrorStateR2 assemble_error_r2(const CoupledState& full, std::span<const double> y_bar, double z_bar_stretched,
                               const SystemParams& params, const Grid& grid);

/// sqrt(‖y‖² + ‖D₁y‖² + ‖D₂y‖² + ‖D₃y‖²) with the nodal difference operators (one-sided
/// closures at the ends). A grid surrogate for the H³ norm.
double h3_surrogate(std::span<const double> y, const Grid& grid);

/// Initial data of the full system and both subsystems, built from the scaled shapes.
struct TikhonovInitial {
    CoupledState full;
    std::vector<double> y_bar;  ///< boundary layer (regime 1) or reduced (regime 2) PDE state
    double z_bar = 0.0;         ///< reduced (regime 1) or boundary layer (regime 2) scalar state
    std::vector<double> y_hat;  ///< intended ŷ₀
    double z_hat = 0.0;         ///< intended ẑ₀
};

/// ŷ₀ = ε^{3/2}ŷ-shape, ȳ₀ = ε^{3/2}ψ, z̄₀ = ε^{1/2}ζ̄, ẑ₀ = ε^{3/2}ζ̂,
/// y₀ = ŷ₀ + ȳ₀ - f·z̄₀, z₀ = ẑ₀ + z̄₀.
TikhonovInitial initial_data_r1(const BaseShapes& shapes, const SystemParams& params, const Grid& grid);

/// ȳ₀ = ε^{3/2}ψ, ẑ₀ = ε^{5/2}ζ̂, z̄₀ = ε^{5/2}ζ̄,
/// ŷ₀ = ε^{5/2}ŷ-shape + a(ẑ₀ + z̄₀)·g with g = x²(x-L)/L² (so y₀'(L) = a z₀),
/// y₀ = ŷ₀ + ȳ₀, z₀ = ẑ₀ + z̄₀ - (c/b)y₀'(0).
/// The shapes must satisfy y'(0) = y'(L) = 0; bump_shape does.
TikhonovInitial initial_data_r2(const BaseShapes& shapes, const SystemParams& params, const Grid& grid);

struct SweepReport {
    std::vector<double> eps_values;
    std::vector<double> errors;   ///< error norm at t_eval
    std::vector<double> mu_hat;   ///< decay fit of the error series per ε (NaN when unfit)
    PowerFit fit;
};

/// Regime-1 Tikhonov sweep (FastKdv): full system, REDUCED_R1, BOUNDARY_LAYER_R1 in τ = t/ε.
/// Throws PredicateViolated when b - ac ≥ 0, std::invalid_argument for ε outside (0, 1).
SweepReport tikhonov_sweep_r1(const BaseShapes& shapes, const SystemParams& params, const std::vector<double>& eps_list,
                              double t_eval, const Grid& grid, const DtRule& dt_rule = {});

/// Regime-2 Tikhonov sweep (FastOde): full system, REDUCED_R2, BOUNDARY_LAYER_R2 in τ, H³ surrogate.
/// Throws ZeroB, PredicateViolated.
SweepReport tikhonov_sweep_r2(const BaseShapes& shapes, const SystemParams& params, const std::vector<double>& eps_list,
                              double t_eval, const Grid& grid, const DtRule& dt_rule = {},
                              const ConstantsRegistry& registry = {});

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct MapRecord {
    double a = 0.0, b = 0.0, c = 0.0;
    double abscissa = 0.0;
    bool stable = false;
    bool pred_thm1 = false;
    bool pred_thm2 = false;
    bool agree = false;  ///< stable == predicate of the regime (thm1 for FastKdv, thm2 for FastOde)
};

/// Samples (a, b, c) uniformly in the ranges and classifies each by spectral abscissa.
/// base supplies ε, L and regime. Throws DimensionCap.
std::vector<MapRecord> stability_map(Range a_range, Range b_range, Range c_range, const SystemParams& base,
                                     const Grid& grid, int samples, std::uint64_t seed,
                                     const ConstantsRegistry& registry = {});

}  // namespace kdvlab
