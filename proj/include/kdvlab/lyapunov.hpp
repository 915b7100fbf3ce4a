#pragma once

#include <span>
#include <string>
#include <vector>

#include "kdvlab/core.hpp"
#include "kdvlab/integrator.hpp"

namespace kdvlab {

/// Weight of the ISS functional W(y) = ∫ w(x) y² dx.
struct WeightChoice {
    enum class Kind { Uniform, Affine };
    Kind kind = Kind::Uniform;
    double beta = 1.0;

    static WeightChoice uniform() { return {}; }
    static WeightChoice affine(double beta = 1.0);

    double operator()(double x) const { return kind == Kind::Uniform ? 1.0 : 1.0 + beta * x; }
    double lower_bound() const { return 1.0; }
    double upper_bound(double L) const { return kind == Kind::Uniform ? 1.0 : 1.0 + beta * L; }
};

/// Constants of the ISS estimate
///   dW/dt ≤ -λ‖y‖² + κ₁‖d₁‖² + κ₂|d₂|² - κ₃|y_x(0)|²,   c̲‖y‖² ≤ W(y) ≤ c̄‖y‖².
struct ConstantsRegistry {
    double lambda = 0.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double kappa3 = 1.0;
    double c_lower = 1.0;
    double c_upper = 1.0;

    /// Identity constants of the uniform weight (exact energy balance).
    static ConstantsRegistry uniform_identity() { return {}; }
    /// Uniform constants with the norm-equivalence bounds of the given weight.
    static ConstantsRegistry for_weight(const WeightChoice& weight, double L);
    /// Throws std::invalid_argument when the invariants fail.
    void validate() const;
};

/// Σ h·y² (trapezoid) + z²
double eval_energy(const CoupledState& state, const Grid& grid);

/// Σ h·w(x_i)·y_i² (trapezoid)
double eval_W(std::span<const double> y, const Grid& grid, const WeightChoice& weight = {});

/// V₁ = εW(y) + ½(ε∫M y dx - z)². Throws SingularProfile.
double eval_V1(const CoupledState& state, const SystemParams& params, const Grid& grid,
               const WeightChoice& weight = {});

struct NormBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// ν̲₁ = min(c̲ε/2, ½c̲ε/(ε²‖M‖² + c̲ε)), ν̄₁ = max(εc̄ + ε²‖M‖², 1) with the trapezoidal
/// ‖M‖² of the grid, so the bounds hold exactly for the discrete V₁.
NormBounds v1_equivalence(const SystemParams& params, const Grid& grid, const ConstantsRegistry& registry);

/// V₂ = -(εκ₂a²/b) z² + W(y). Throws NonNegativeB.
double eval_V2(const CoupledState& state, const SystemParams& params, const Grid& grid,
               const ConstantsRegistry& registry, const WeightChoice& weight = {});
/// ν̲₂ = min(c̲, -εκ₂a²/b), ν̄₂ = max(c̄, -εκ₂a²/b)
NormBounds v2_equivalence(const SystemParams& params, const ConstantsRegistry& registry);

/// V₃ = W(v) - εκ₂a²b z̃². Throws NonNegativeB.
double eval_V3(std::span<const double> v, double z_tilde, const SystemParams& params, const Grid& grid,
               const ConstantsRegistry& registry, const WeightChoice& weight = {});
/// V₄ = W(v̂) - 3εκ₂a²b ẑ². Throws NonNegativeB.
double eval_V4(std::span<const double> v_hat, double z_hat, const SystemParams& params, const Grid& grid,
               const ConstantsRegistry& registry, const WeightChoice& weight = {});
/// ν̲₄ = min(c̲, -3εκ₂a²b), ν̄₄ = max(c̄, -3εκ₂a²b)
NormBounds v4_equivalence(const SystemParams& params, const ConstantsRegistry& registry);

/// z̃ = z + (c/b)·y_x(0)
double z_tilde(const CoupledState& state, const SystemParams& params, const Grid& grid);

struct IssReport {
    std::vector<double> times;     ///< interval midpoints
    std::vector<double> residual;  ///< |lhs - rhs| (uniform) or signed slack (other weights)
    double integrated = 0.0;       ///< Σ residual·Δt
};

/// Uniform weight: checks the balance d/dt‖y‖² = s·(d₂² - y_x(0)² + 2∫d₁y) on each step
/// interval (s = 1/ε in FastKdv, 1 in FastOde; d₂ = a·z when the disturbance has none),
/// with the right side averaged over the interval end points.
/// Other weights: signed slack dW/dt - s·(-λ‖y‖² + κ₁‖d₁‖² + κ₂d₂² - κ₃y_x(0)²).
/// Throws DenseSnapshotsRequired unless every sample has a snapshot.
IssReport iss_balance_monitor(const Trajectory& traj, const SystemParams& params, const Grid& grid,
                              const ConstantsRegistry& registry, const Disturbance& disturbance = {},
                              const WeightChoice& weight = {});

struct DecayFit {
    double mu_hat = 0.0;
    double r_squared = 0.0;
};

inline constexpr double kDefaultTransient = 0.2;
inline constexpr std::size_t kMinFitSamples = 10;

/// Least-squares slope of log(values) against time after dropping the leading
/// transient fraction; mu_hat = -slope. Throws NonPositiveValues, and
/// std::invalid_argument when fewer than 10 samples remain.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   double transient = kDefaultTransient);

/// Named observer for simulate(): energy, W, V1, V2, V3 (V3 from v = εy_t and z̃, FastOde).
/// Throws std::invalid_argument for other names.
Observer make_observer(const std::string& name, const SystemParams& params, const Grid& grid,
                       const ConstantsRegistry& registry = {}, const WeightChoice& weight = {});

}  // namespace kdvlab
