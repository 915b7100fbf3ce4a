#include "kdvlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "kdvlab/errors.hpp"
#include "kdvlab/profiles.hpp"

namespace kdvlab {

namespace {

int step_count(double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (T < 0.0) throw std::invalid_argument("horizon must be nonnegative");
    if (T == 0.0) return 0;
    return static_cast<int>(std::ceil(T / dt - 1e-9));
}

void check_theta(double theta) {
    if (!(theta >= 0.5 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [1/2, 1]");
}

std::vector<double> scaled(std::span<const double> v, double s) {
    std::vector<double> out(v.begin(), v.end());
    for (auto& x : out) x *= s;
    return out;
}

BorderedSolver coupled_solver(const SystemParams& p, const SpatialOperator& op, double dt, double theta,
                              NeumannSource source) {
    const double sy = p.pde_scale();
    const double sz = p.ode_scale();
    BandMatrix A = op.interior_matrix().shifted(1.0, -theta * dt * sy);
    std::vector<double> u = scaled(op.neumann_unit(), source == NeumannSource::State ? -theta * dt * sy * p.a : 0.0);
    std::vector<double> v = scaled(op.trace_stencil(), -theta * dt * sz * p.c);
    return BorderedSolver(std::move(A), std::move(u), std::move(v), 1.0 - theta * dt * sz * p.b);
}

void record(Trajectory& traj, const CoupledState& s, const SpatialOperator& op, const std::vector<Observer>& observers,
            bool snapshot) {
    traj.times.push_back(s.t);
    traj.z.push_back(s.z);
    traj.yx0.push_back(s.y.empty() ? 0.0 : op.trace(s.y));
    for (const auto& obs : observers) traj.functionals[obs.name].push_back(obs.eval(s));
    if (snapshot) {
        traj.snapshot_times.push_back(s.t);
        traj.snapshots.push_back(s.y);
    }
}

bool keep_snapshot(int k, int steps, int stride) {
    if (stride <= 0) return k == 0 || k == steps;
    return k % stride == 0 || k == steps;
}

void check_state(const CoupledState& s, const Grid& grid) {
    if (static_cast<int>(s.y.size()) != grid.intervals() + 1) {
        throw std::invalid_argument("state has " + std::to_string(s.y.size()) + " nodal values, grid needs " +
                                    std::to_string(grid.intervals() + 1));
    }
}

/// θ-scheme for ȳ' = K ȳ + e·ξ, ξ = k·ȳ with k = -(ac/b)·τ (the reflective Neumann
/// feedback of the regime-2 reduced system), solved with ξ as an algebraic border.
class ReflectiveStepper {
public:
    ReflectiveStepper(const SystemParams& p, const Grid& grid, double dt, double theta)
        : op_(grid, 1.0), gain_(-p.a * p.c / p.b), dt_(dt), theta_(theta) {
        BandMatrix A = op_.interior_matrix().shifted(1.0, -theta * dt);
        std::vector<double> u = scaled(op_.neumann_unit(), -theta * dt);
        std::vector<double> v = scaled(op_.trace_stencil(), -gain_);
        solver_ = BorderedSolver(std::move(A), std::move(u), std::move(v), 1.0);
    }

    const SpatialOperator& op() const { return op_; }

    CoupledState advance(const CoupledState& s) const {
        const int n = op_.grid().intervals();
        const double xi = gain_ * op_.trace(s.y);
        const std::vector<double> f = op_.apply(s.y, xi);
        std::vector<double> r(static_cast<std::size_t>(n - 1));
        for (int i = 1; i < n; ++i) r[i - 1] = s.y[i] + (1.0 - theta_) * dt_ * f[i];
        double rho = 0.0;
        solver_.solve(r, rho);
        CoupledState out{s.t + dt_, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0), 0.0};
        for (int i = 1; i < n; ++i) out.y[i] = r[i - 1];
        return out;
    }

private:
    SpatialOperator op_;
    double gain_;
    double dt_;
    double theta_;
    BorderedSolver solver_;
};

}  // namespace

StepperPlan::StepperPlan(const SystemParams& params, const Grid& grid, double dt, double theta, NeumannSource source)
    : params_(params), op_(grid, params.a), dt_(dt), theta_(theta), source_(source) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    check_theta(theta);
    solver_ = coupled_solver(params, op_, dt, theta, source);
}

bool StepperPlan::matches(const SystemParams& params, const Grid& grid, double dt, double theta,
                          NeumannSource source) const {
    return params == params_ && grid == op_.grid() && dt == dt_ && theta == theta_ && source == source_;
}

CoupledState StepperPlan::advance(const CoupledState& state, const Disturbance& disturbance) const {
    const Grid& grid = op_.grid();
    const int n = grid.intervals();
    check_state(state, grid);
    const SemiDiscreteRhs f0 = semidiscrete_rhs(state, params_, op_, disturbance, state.t);

    std::vector<double> r(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) r[i - 1] = state.y[i] + (1.0 - theta_) * dt_ * f0.dy[i];
    double rho = state.z + (1.0 - theta_) * dt_ * f0.dz;

    if (disturbance.has_d1() || disturbance.has_d2()) {
        // The semi-discrete right-hand side at the zero state is the pure forcing term.
        const SemiDiscreteRhs f1 =
            semidiscrete_rhs(CoupledState::zero(grid, state.t + dt_), params_, op_, disturbance, state.t + dt_);
        for (int i = 1; i < n; ++i) r[i - 1] += theta_ * dt_ * f1.dy[i];
    }
    solver_.solve(r, rho);

    CoupledState out{state.t + dt_, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0), rho};
    for (int i = 1; i < n; ++i) out.y[i] = r[i - 1];
    return out;
}

CoupledState step(const CoupledState& state, const StepperPlan& plan, const SystemParams& params,
                  const Disturbance& disturbance) {
    const NeumannSource source = disturbance.has_d2() ? NeumannSource::Disturbance : NeumannSource::State;
    if (!(params == plan.params()) || source != plan.source()) {
        throw std::invalid_argument("step: plan was built for different parameters or Neumann source");
    }
    return plan.advance(state, disturbance);
}

Trajectory simulate(const SystemParams& params, const Grid& grid, const CoupledState& ic, double T, double dt,
                    const Disturbance& disturbance, const std::vector<Observer>& observers,
                    const SimulationOptions& options) {
    check_state(ic, grid);
    const int steps = step_count(T, dt);
    const double dt_eff = steps > 0 ? T / steps : dt;
    const NeumannSource source = disturbance.has_d2() ? NeumannSource::Disturbance : NeumannSource::State;
    const StepperPlan plan(params, grid, dt_eff, options.theta, source);

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    CoupledState s = ic;
    s.y.front() = 0.0;
    s.y.back() = 0.0;
    const double t0 = s.t;
    record(traj, s, plan.op(), observers, keep_snapshot(0, steps, options.snapshot_stride));
    for (int k = 1; k <= steps; ++k) {
        s = plan.advance(s, disturbance);
        s.t = t0 + k * dt_eff;
        record(traj, s, plan.op(), observers, keep_snapshot(k, steps, options.snapshot_stride));
    }
    return traj;
}

std::string_view to_string(SubsystemKind kind) {
    switch (kind) {
        case SubsystemKind::ReducedR1: return "REDUCED_R1";
        case SubsystemKind::BoundaryLayerR1: return "BOUNDARY_LAYER_R1";
        case SubsystemKind::ReducedR2: return "REDUCED_R2";
        case SubsystemKind::BoundaryLayerR2: return "BOUNDARY_LAYER_R2";
    }
    return "?";
}

Trajectory simulate_subsystem(SubsystemKind kind, const SystemParams& params, const Grid& grid,
                              const CoupledState& ic, double T, double dt, const SimulationOptions& options) {
    check_theta(options.theta);
    const int steps = step_count(T, dt);
    const double dt_eff = steps > 0 ? T / steps : dt;
    const double theta = options.theta;
    Trajectory traj;

    if (kind == SubsystemKind::ReducedR1 || kind == SubsystemKind::BoundaryLayerR2) {
        double rate = params.b - params.a * params.c;
        if (kind == SubsystemKind::BoundaryLayerR2) {
            if (!(params.b < 0.0)) {
                throw DomainError(ErrorCode::NonNegativeB, "boundary-layer system of regime 2 needs b < 0");
            }
            rate = params.b;
        }
        const double amp = (1.0 + (1.0 - theta) * dt_eff * rate) / (1.0 - theta * dt_eff * rate);
        double z = ic.z;
        for (int k = 0; k <= steps; ++k) {
            if (k > 0) z *= amp;
            traj.times.push_back(ic.t + k * dt_eff);
            traj.z.push_back(z);
            traj.yx0.push_back(0.0);
        }
        return traj;
    }

    check_state(ic, grid);
    const std::vector<Observer> none;
    CoupledState s = ic;
    s.y.front() = 0.0;
    s.y.back() = 0.0;
    s.z = 0.0;
    const double t0 = s.t;

    if (kind == SubsystemKind::BoundaryLayerR1) {
        SystemParams layer{0.0, 0.0, 0.0, 1.0, params.L, Regime::FastKdv};
        const StepperPlan plan(layer, grid, dt_eff, theta);
        record(traj, s, plan.op(), none, keep_snapshot(0, steps, options.snapshot_stride));
        for (int k = 1; k <= steps; ++k) {
            s = plan.advance(s, {});
            s.t = t0 + k * dt_eff;
            record(traj, s, plan.op(), none, keep_snapshot(k, steps, options.snapshot_stride));
        }
        return traj;
    }

    if (params.b == 0.0) throw DomainError(ErrorCode::ZeroB, "reduced system of regime 2 needs b != 0");
    const ReflectiveStepper stepper(params, grid, dt_eff, theta);
    record(traj, s, stepper.op(), none, keep_snapshot(0, steps, options.snapshot_stride));
    for (int k = 1; k <= steps; ++k) {
        s = stepper.advance(s);
        s.t = t0 + k * dt_eff;
        record(traj, s, stepper.op(), none, keep_snapshot(k, steps, options.snapshot_stride));
    }
    return traj;
}

std::vector<double> compute_v(std::span<const double> y, double neumann_datum, double epsilon,
                              const SpatialOperator& op) {
    std::vector<double> v = op.apply(y, neumann_datum);
    for (auto& x : v) x *= epsilon;
    return v;
}

std::vector<double> compute_v(const CoupledState& state, const SystemParams& params, const Grid& grid) {
    if (params.regime != Regime::FastOde) throw std::invalid_argument("compute_v requires the FastOde regime");
    const SpatialOperator op(grid, params.a);
    return compute_v(state.y, params.a * state.z, params.epsilon, op);
}

ManufacturedSolution polynomial_mms(double L) {
    ManufacturedSolution m;
    m.u = [L](double t, double x) { return std::exp(-t) * x * x * (L - x) * (L - x); };
    m.u_t = [L](double t, double x) { return -std::exp(-t) * x * x * (L - x) * (L - x); };
    m.u_x = [L](double t, double x) { return std::exp(-t) * (4 * x * x * x - 6 * L * x * x + 2 * L * L * x); };
    m.u_xxx = [L](double t, double x) { return std::exp(-t) * (24 * x - 12 * L); };
    return m;
}

ManufacturedSolution steady_profile_mms(double a, double L) {
    const double s = std::sin(L / 2.0);
    if (std::abs(s) < kSingularProfileTol) {
        throw DomainError(ErrorCode::SingularProfile, "sin(L/2) vanishes at L = " + std::to_string(L));
    }
    ManufacturedSolution m;
    m.u = [a, L](double t, double x) { return -eval_f(x, a, L) * std::exp(-t); };
    m.u_t = [a, L](double t, double x) { return eval_f(x, a, L) * std::exp(-t); };
    // f'(x) = -a·sin(x - L/2)/sin(L/2), f''' = -f'
    m.u_x = [a, L, s](double t, double x) { return a * std::sin(x - L / 2.0) / s * std::exp(-t); };
    m.u_xxx = [a, L, s](double t, double x) { return -a * std::sin(x - L / 2.0) / s * std::exp(-t); };
    return m;
}

ManufacturedSolution zero_mms() {
    auto zero = [](double, double) { return 0.0; };
    return {zero, zero, zero, zero};
}

Disturbance mms_disturbance(const ManufacturedSolution& exact, const SystemParams& params) {
    const double tcoef = 1.0 / params.pde_scale();
    const double L = params.L;
    Disturbance d;
    d.d1 = [exact, tcoef](double t, double x) { return tcoef * exact.u_t(t, x) + exact.u_x(t, x) + exact.u_xxx(t, x); };
    d.d2 = [exact, L](double t) { return exact.u_x(t, L); };
    return d;
}

Disturbance mms_discrete_disturbance(const ManufacturedSolution& exact, const SystemParams& params,
                                     const Grid& grid) {
    struct Cache {
        double t = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> Ku;
    };
    auto cache = std::make_shared<Cache>();
    const double tcoef = 1.0 / params.pde_scale();
    const auto op = std::make_shared<SpatialOperator>(grid, params.a);
    Disturbance d;
    d.d1 = [exact, tcoef, op, cache](double t, double x) {
        const Grid& g = op->grid();
        if (!(cache->t == t)) {
            std::vector<double> u(static_cast<std::size_t>(g.intervals() + 1));
            for (int j = 0; j <= g.intervals(); ++j) u[j] = exact.u(t, g.node(j));
            cache->Ku = op->apply(u, exact.u_x(t, g.length()));
            cache->t = t;
        }
        const int i = static_cast<int>(std::lround(x / g.spacing()));
        return tcoef * exact.u_t(t, x) - cache->Ku[i];
    };
    const double L = params.L;
    d.d2 = [exact, L](double t) { return exact.u_x(t, L); };
    return d;
}

namespace {

double field_error(const CoupledState& s, const Grid& grid, const ManufacturedSolution& exact) {
    std::vector<double> e(s.y.size());
    for (int i = 0; i <= grid.intervals(); ++i) e[i] = s.y[i] - exact.u(s.t, grid.node(i));
    return std::sqrt(l2_norm_sq(e, grid.spacing()));
}

}  // namespace

MmsReport mms_run(const Grid& grid, const SystemParams& params, const ManufacturedSolution& exact, double T,
                  double dt, MmsForcing forcing) {
    const int steps = step_count(T, dt);
    CoupledState s = CoupledState::sampled(grid, [&](double x) { return exact.u(0.0, x); }, 0.0);
    MmsReport report;
    report.max_error = report.final_error = field_error(s, grid, exact);
    if (steps == 0) return report;
    const double dt_eff = T / steps;
    const Disturbance d = forcing == MmsForcing::Analytic ? mms_disturbance(exact, params)
                                                          : mms_discrete_disturbance(exact, params, grid);
    const StepperPlan plan(params, grid, dt_eff, 0.5, NeumannSource::Disturbance);
    for (int k = 1; k <= steps; ++k) {
        s = plan.advance(s, d);
        s.t = k * dt_eff;
        report.final_error = field_error(s, grid, exact);
        report.max_error = std::max(report.max_error, report.final_error);
    }
    return report;
}

std::vector<double> observed_orders(const std::vector<double>& errors, double ratio) {
    std::vector<double> orders;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        orders.push_back(std::log(errors[k - 1] / errors[k]) / std::log(ratio));
    }
    return orders;
}

ConvergenceReport mms_convergence(const SystemParams& params, const ManufacturedSolution& exact, double T,
                                  const std::vector<int>& n_ladder, double dt_fine, int n_time,
                                  const std::vector<double>& dt_ladder) {
    ConvergenceReport rep;
    rep.n_ladder = n_ladder;
    for (int n : n_ladder) rep.spatial_errors.push_back(mms_run(Grid(params.L, n), params, exact, T, dt_fine).max_error);
    if (n_ladder.size() > 1) {
        rep.spatial_orders = observed_orders(rep.spatial_errors, double(n_ladder[1]) / n_ladder[0]);
    }

    rep.dt_ladder = dt_ladder;
    const Grid grid(params.L, n_time);
    for (double dt : dt_ladder) {
        rep.temporal_errors.push_back(mms_run(grid, params, exact, T, dt, MmsForcing::Discrete).max_error);
    }
    if (dt_ladder.size() > 1) rep.temporal_orders = observed_orders(rep.temporal_errors, dt_ladder[0] / dt_ladder[1]);
    return rep;
}

}  // namespace kdvlab
