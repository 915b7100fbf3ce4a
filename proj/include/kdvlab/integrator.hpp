#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kdvlab/banded.hpp"
#include "kdvlab/core.hpp"
#include "kdvlab/kdv_operator.hpp"

namespace kdvlab {

/// Where the right Neumann datum comes from: the coupled state (a·z) or the
/// disturbance's d2(t).
enum class NeumannSource { State, Disturbance };

/// Factorized θ-scheme step matrix (I - θ·dt·G) for the coupled generator G acting
/// on (y[1..n-1], z). Immutable once built; reuse while params, grid, dt, θ and the
/// Neumann source are unchanged.
class StepperPlan {
public:
    StepperPlan(const SystemParams& params, const Grid& grid, double dt, double theta = 0.5,
                NeumannSource source = NeumannSource::State);

    const SystemParams& params() const { return params_; }
    const Grid& grid() const { return op_.grid(); }
    const SpatialOperator& op() const { return op_; }
    double dt() const { return dt_; }
    double theta() const { return theta_; }
    NeumannSource source() const { return source_; }

    bool matches(const SystemParams& params, const Grid& grid, double dt, double theta,
                 NeumannSource source) const;

    /// One step; the returned state has t advanced by dt and y[0] = y[n] = 0.
    CoupledState advance(const CoupledState& state, const Disturbance& disturbance) const;

private:
    SystemParams params_;
    SpatialOperator op_;
    double dt_;
    double theta_;
    NeumannSource source_;
    BorderedSolver solver_;
};

/// One θ-scheme step. Throws std::invalid_argument if the plan was built for other
/// parameters, and DomainError(SolveFailure) on a singular step matrix.
CoupledState step(const CoupledState& state, const StepperPlan& plan, const SystemParams& params,
                  const Disturbance& disturbance = {});

struct Observer {
    std::string name;
    std::function<double(const CoupledState&)> eval;
};

struct SimulationOptions {
    double theta = 0.5;
    /// Keep every k-th state as a snapshot (1 = dense). 0 keeps the initial and final
    /// states only.
    int snapshot_stride = 0;
};

/// Integrates the coupled system to time T (the step is adjusted to T / ceil(T / dt)).
Trajectory simulate(const SystemParams& params, const Grid& grid, const CoupledState& ic, double T, double dt,
                    const Disturbance& disturbance = {}, const std::vector<Observer>& observers = {},
                    const SimulationOptions& options = {});

/// Subsystems of the two-time-scale decomposition.
///   ReducedR1:        ż̄ = (b - ac) z̄
///   BoundaryLayerR1:  ȳ_τ + ȳ_x + ȳ_xxx = 0, ȳ_x(τ,L) = 0
///   ReducedR2:        ȳ_t + ȳ_x + ȳ_xxx = 0, ȳ_x(t,L) = -(ac/b) ȳ_x(t,0)
///   BoundaryLayerR2:  dz̄/dτ = b z̄
/// Boundary-layer systems run in their own time τ; callers map τ = t/ε.
enum class SubsystemKind { ReducedR1, BoundaryLayerR1, ReducedR2, BoundaryLayerR2 };

std::string_view to_string(SubsystemKind kind);

Trajectory simulate_subsystem(SubsystemKind kind, const SystemParams& params, const Grid& grid,
                              const CoupledState& ic, double T, double dt, const SimulationOptions& options = {});

/// v = ε·y_t = -ε·(y_x + y_xxx) with the operator's closures and Neumann datum a·z.
/// Requires the FastOde regime.
std::vector<double> compute_v(const CoupledState& state, const SystemParams& params, const Grid& grid);
/// Same with an explicit Neumann datum.
std::vector<double> compute_v(std::span<const double> y, double neumann_datum, double epsilon,
                              const SpatialOperator& op);

/// Analytic field with homogeneous Dirichlet traces and its derivatives.
struct ManufacturedSolution {
    std::function<double(double, double)> u;
    std::function<double(double, double)> u_t;
    std::function<double(double, double)> u_x;
    std::function<double(double, double)> u_xxx;
};

/// e^{-t}·x²(L-x)²
ManufacturedSolution polynomial_mms(double L);
/// -f(x)·e^{-t}
ManufacturedSolution steady_profile_mms(double a, double L);
ManufacturedSolution zero_mms();

/// d1 = ε_t·u_t + u_x + u_xxx (ε_t = ε in FastKdv, 1 in FastOde), d2 = u_x(t, L).
Disturbance mms_disturbance(const ManufacturedSolution& exact, const SystemParams& params);

/// Same with the spatial derivatives replaced by the discrete operator applied to the
/// sampled field, so the nodal samples of u solve the semi-discrete system exactly and
/// only the time-stepping error remains. d1 may only be evaluated at grid nodes; the
/// returned object caches per time level and must not be shared between threads.
Disturbance mms_discrete_disturbance(const ManufacturedSolution& exact, const SystemParams& params, const Grid& grid);

struct MmsReport {
    double max_error = 0.0;    ///< max over steps of the L² error in y
    double final_error = 0.0;
};

enum class MmsForcing { Analytic, Discrete };

MmsReport mms_run(const Grid& grid, const SystemParams& params, const ManufacturedSolution& exact, double T,
                  double dt, MmsForcing forcing = MmsForcing::Analytic);

struct ConvergenceReport {
    std::vector<int> n_ladder;
    std::vector<double> spatial_errors;
    std::vector<double> spatial_orders;
    std::vector<double> dt_ladder;
    std::vector<double> temporal_errors;
    std::vector<double> temporal_orders;
};

/// Spatial orders: error against the exact field with a fixed fine dt. Temporal orders:
/// error on a fixed grid under the discretely consistent forcing, where the nodal samples
/// of the exact field are the semi-discrete solution.
ConvergenceReport mms_convergence(const SystemParams& params, const ManufacturedSolution& exact, double T,
                                  const std::vector<int>& n_ladder, double dt_fine, int n_time,
                                  const std::vector<double>& dt_ladder);

std::vector<double> observed_orders(const std::vector<double>& errors, double ratio = 2.0);

}  // namespace kdvlab
