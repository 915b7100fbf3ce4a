#include "kdvlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "kdvlab/differences.hpp"
#include "kdvlab/errors.hpp"
#include "kdvlab/integrator.hpp"
#include "kdvlab/kdv_operator.hpp"
#include "kdvlab/profiles.hpp"
#include "kdvlab/spectral.hpp"

namespace kdvlab {

bool predicate_thm1(double a, double b, double c) { return b - a * c < 0.0; }

Prop1Roots prop1_roots(double a, double eps, const ConstantsRegistry& registry, double M_norm_sq) {
    if (!(registry.lambda > 0.0)) throw DomainError(ErrorCode::ZeroLambda, "registry lambda must be positive");
    Prop1Roots r;
    r.alpha = registry.lambda / (2.0 * M_norm_sq * eps * eps);
    r.distinct = a * a < r.alpha / (4.0 * registry.kappa2);
    if (r.distinct) {
        const double root = std::sqrt(1.0 - 4.0 * registry.kappa2 * a * a / r.alpha);
        r.x1 = r.alpha * (1.0 - root) / 2.0;
        r.x2 = r.alpha * (1.0 + root) / 2.0;
    }
    return r;
}

bool predicate_prop1(double a, double b, double c, double eps, const ConstantsRegistry& registry, double M_norm_sq) {
    const Prop1Roots r = prop1_roots(a, eps, registry, M_norm_sq);
    const double x = -(b - a * c);
    return r.distinct && r.x1 < x && x < r.x2;
}

namespace {

double coupling_ratio(double a, double b, double c) { return a * a * c * c / (b * b); }

}  // namespace

bool predicate_prop2(double a, double b, double c, const ConstantsRegistry& registry) {
    return b < 0.0 && coupling_ratio(a, b, c) < registry.kappa3 / (4.0 * registry.kappa2);
}

bool predicate_thm2(double a, double b, double c, const ConstantsRegistry& registry) {
    return b < 0.0 && coupling_ratio(a, b, c) < registry.kappa3 / registry.kappa2;
}

bool predicate_tikh2(double a, double b, double c, double eps, const ConstantsRegistry& registry) {
    return b < 0.0 && coupling_ratio(a, b, c) < registry.kappa3 / (44.0 * registry.kappa2 * eps * eps);
}

PowerFit fit_power_law(const std::vector<double>& eps, const std::vector<double>& errors) {
    if (eps.size() != errors.size() || eps.size() < 2) {
        throw std::invalid_argument("fit_power_law: need at least two matching points");
    }
    const std::size_t m = eps.size();
    std::vector<double> lx(m), ly(m);
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (!(eps[k] > 0.0 && errors[k] > 0.0)) {
            throw DomainError(ErrorCode::NonPositiveValues, "power-law fit needs positive data");
        }
        lx[k] = std::log(eps[k]);
        ly[k] = std::log(errors[k]);
        sx += lx[k];
        sy += ly[k];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
        syy += (ly[k] - my) * (ly[k] - my);
    }
    PowerFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double e = ly[k] - (fit.intercept + fit.slope * lx[k]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::function<double(double)> bump_shape(int k, double L) {
    auto raw = [k, L](double x) { return std::sin(2.0 * std::numbers::pi * k * x / L) * x * (L - x) / (L * L); };
    // Composite Simpson for the normalization; the integrand is smooth.
    constexpr int panels = 4096;
    const double h = L / panels;
    double sum = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double v = raw(i * h);
        sum += w * v * v;
    }
    const double scale = 1.0 / std::sqrt(sum * h / 3.0);
    return [raw, scale](double x) { return scale * raw(x); };
}

BaseShapes default_base_shapes(double L) { return {bump_shape(1, L), bump_shape(2, L), 1.0, 1.0}; }

double DtRule::operator()(double eps) const { return std::min(eps, 1.0) * fraction; }

double ErrorStateR1::norm(const Grid& grid) const {
    return std::sqrt(l2_norm_sq(y_hat, grid.spacing())) + std::abs(z_hat);
}

ErrorStateR1 assemble_error_r1(const CoupledState& full, double z_bar, std::span<const double> y_bar_stretched,
                               const SystemParams& params, const Grid& grid) {
    const ProfileSample f = sample_profile(grid, ProfileKind::F, params.a);
    ErrorStateR1 e;
    e.t = full.t;
    e.z_hat = full.z - z_bar;
    e.y_hat.resize(full.y.size());
    for (std::size_t i = 0; i < full.y.size(); ++i) e.y_hat[i] = full.y[i] + f.values[i] * z_bar - y_bar_stretched[i];
    return e;
}

double h3_surrogate(std::span<const double> y, const Grid& grid) {
    const double h = grid.spacing();
    double total = l2_norm_sq(y, h);
    for (int order = 1; order <= 3; ++order) total += l2_norm_sq(fd::nodal_derivative(y, h, order), h);
    return std::sqrt(total);
}

double ErrorStateR2::norm(const Grid& grid) const { return h3_surrogate(y_hat, grid) + std::abs(z_hat); }

ErrorStateR2 assemble_error_r2(const CoupledState& full, std::span<const double> y_bar, double z_bar_stretched,
                               const SystemParams& params, const Grid& grid) {
    if (params.b == 0.0) throw DomainError(ErrorCode::ZeroB, "regime-2 error state needs b != 0");
    const SpatialOperator op(grid, params.a);
    const std::vector<double> v = compute_v(full.y, params.a * full.z, params.epsilon, op);
    const double ybar_x0 = op.trace(y_bar);
    const std::vector<double> v_bar = compute_v(y_bar, -params.a * params.c / params.b * ybar_x0, params.epsilon, op);
    ErrorStateR2 e;
    e.t = full.t;
    e.z_hat = full.z + params.c / params.b * op.trace(full.y) - z_bar_stretched;
    e.y_hat.resize(full.y.size());
    e.v_hat.resize(full.y.size());
    for (std::size_t i = 0; i < full.y.size(); ++i) {
        e.y_hat[i] = full.y[i] - y_bar[i];
        e.v_hat[i] = v[i] - v_bar[i];
    }
    return e;
}

namespace {

std::vector<double> sample(const Grid& grid, const std::function<double(double)>& fn, double scale) {
    std::vector<double> out(static_cast<std::size_t>(grid.intervals() + 1), 0.0);
    for (int i = 1; i < grid.intervals(); ++i) out[i] = scale * fn(grid.node(i));
    return out;
}

void check_eps_list(const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("sweep needs at least one epsilon");
    for (double eps : eps_list) {
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("sweep epsilons must lie in (0, 1)");
    }
}

double fit_or_nan(const std::vector<double>& times, const std::vector<double>& values) {
    try {
        return fit_decay(times, values).mu_hat;
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

struct PointResult {
    double error = 0.0;
    double mu_hat = 0.0;
};

SweepReport collect(const std::vector<double>& eps_list, std::vector<std::future<PointResult>>& futures) {
    SweepReport report;
    report.eps_values = eps_list;
    for (auto& f : futures) {
        const PointResult r = f.get();
        report.errors.push_back(r.error);
        report.mu_hat.push_back(r.mu_hat);
    }
    if (eps_list.size() >= 2) report.fit = fit_power_law(report.eps_values, report.errors);
    return report;
}

void require_same_length(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) throw std::logic_error("fast and slow trajectories sampled on different step counts");
}

}  // namespace

TikhonovInitial initial_data_r1(const BaseShapes& shapes, const SystemParams& params, const Grid& grid) {
    const double eps = params.epsilon;
    const double e32 = std::pow(eps, 1.5);
    TikhonovInitial ic;
    ic.y_hat = sample(grid, shapes.y_hat, e32);
    ic.y_bar = sample(grid, shapes.y_bar, e32);
    ic.z_bar = std::sqrt(eps) * shapes.zeta_bar;
    ic.z_hat = e32 * shapes.zeta_hat;
    const ProfileSample f = sample_profile(grid, ProfileKind::F, params.a);
    ic.full = CoupledState::zero(grid);
    for (std::size_t i = 0; i < ic.full.y.size(); ++i) {
        ic.full.y[i] = ic.y_hat[i] + ic.y_bar[i] - f.values[i] * ic.z_bar;
    }
    ic.full.z = ic.z_hat + ic.z_bar;
    return ic;
}

TikhonovInitial initial_data_r2(const BaseShapes& shapes, const SystemParams& params, const Grid& grid) {
    if (params.b == 0.0) throw DomainError(ErrorCode::ZeroB, "regime-2 initial data needs b != 0");
    const double eps = params.epsilon;
    const double e52 = std::pow(eps, 2.5);
    const double L = params.L;
    TikhonovInitial ic;
    ic.y_bar = sample(grid, shapes.y_bar, std::pow(eps, 1.5));
    ic.z_hat = e52 * shapes.zeta_hat;
    ic.z_bar = e52 * shapes.zeta_bar;
    const double lift = params.a * (ic.z_hat + ic.z_bar);
    ic.y_hat = sample(grid, [&](double x) { return e52 * shapes.y_hat(x) + lift * x * x * (x - L) / (L * L); }, 1.0);
    ic.full = CoupledState::zero(grid);
    for (std::size_t i = 0; i < ic.full.y.size(); ++i) ic.full.y[i] = ic.y_hat[i] + ic.y_bar[i];
    // The shapes have y'(0) = 0, so the correction -(c/b)·y₀'(0) vanishes in the continuum;
    // the discrete trace is used to keep ẑ(0) = ẑ₀ exactly.
    ic.full.z = ic.z_hat + ic.z_bar - params.c / params.b * trace_yx0(ic.full, grid);
    return ic;
}

SweepReport tikhonov_sweep_r1(const BaseShapes& shapes, const SystemParams& params, const std::vector<double>& eps_list,
                              double t_eval, const Grid& grid, const DtRule& dt_rule) {
    if (!predicate_thm1(params.a, params.b, params.c)) {
        throw DomainError(ErrorCode::PredicateViolated, "regime-1 sweep needs b - ac < 0");
    }
    check_eps_list(eps_list);
    std::vector<std::future<PointResult>> futures;
    for (double eps : eps_list) {
        futures.push_back(std::async(std::launch::async, [=, &shapes, &grid]() {
            SystemParams p = params;
            p.epsilon = eps;
            p.regime = Regime::FastKdv;
            const double dt = dt_rule(eps);
            const TikhonovInitial ic = initial_data_r1(shapes, p, grid);
            SimulationOptions dense;
            dense.snapshot_stride = 1;
            const Trajectory full = simulate(p, grid, ic.full, t_eval, dt, {}, {}, dense);
            CoupledState z_ic = CoupledState::zero(grid);
            z_ic.z = ic.z_bar;
            const Trajectory reduced = simulate_subsystem(SubsystemKind::ReducedR1, p, grid, z_ic, t_eval, dt);
            CoupledState y_ic = CoupledState::zero(grid);
            y_ic.y = ic.y_bar;
            const Trajectory layer =
                simulate_subsystem(SubsystemKind::BoundaryLayerR1, p, grid, y_ic, t_eval / eps, dt / eps, dense);
            require_same_length(full, reduced);
            require_same_length(full, layer);
            std::vector<double> series(full.size());
            for (std::size_t k = 0; k < full.size(); ++k) {
                const CoupledState s{full.times[k], full.snapshots[k], full.z[k]};
                series[k] = assemble_error_r1(s, reduced.z[k], layer.snapshots[k], p, grid).norm(grid);
            }
            return PointResult{series.back(), fit_or_nan(full.times, series)};
        }));
    }
    return collect(eps_list, futures);
}

SweepReport tikhonov_sweep_r2(const BaseShapes& shapes, const SystemParams& params, const std::vector<double>& eps_list,
                              double t_eval, const Grid& grid, const DtRule& dt_rule,
                              const ConstantsRegistry& registry) {
    if (params.b == 0.0) throw DomainError(ErrorCode::ZeroB, "regime-2 sweep needs b != 0");
    check_eps_list(eps_list);
    for (double eps : eps_list) {
        if (!predicate_tikh2(params.a, params.b, params.c, eps, registry)) {
            throw DomainError(ErrorCode::PredicateViolated,
                              "regime-2 sweep needs b < 0 and a²c²/b² < κ₃/(44κ₂ε²) at ε = " + std::to_string(eps));
        }
    }
    std::vector<std::future<PointResult>> futures;
    for (double eps : eps_list) {
        futures.push_back(std::async(std::launch::async, [=, &shapes, &grid]() {
            SystemParams p = params;
            p.epsilon = eps;
            p.regime = Regime::FastOde;
            const double dt = dt_rule(eps);
            const TikhonovInitial ic = initial_data_r2(shapes, p, grid);
            SimulationOptions dense;
            dense.snapshot_stride = 1;
            const Trajectory full = simulate(p, grid, ic.full, t_eval, dt, {}, {}, dense);
            CoupledState y_ic = CoupledState::zero(grid);
            y_ic.y = ic.y_bar;
            const Trajectory reduced = simulate_subsystem(SubsystemKind::ReducedR2, p, grid, y_ic, t_eval, dt, dense);
            CoupledState z_ic = CoupledState::zero(grid);
            z_ic.z = ic.z_bar;
            const Trajectory layer =
                simulate_subsystem(SubsystemKind::BoundaryLayerR2, p, grid, z_ic, t_eval / eps, dt / eps);
            require_same_length(full, reduced);
            require_same_length(full, layer);
            std::vector<double> series(full.size());
            for (std::size_t k = 0; k < full.size(); ++k) {
                const CoupledState s{full.times[k], full.snapshots[k], full.z[k]};
                series[k] = assemble_error_r2(s, reduced.snapshots[k], layer.z[k], p, grid).norm(grid);
            }
            return PointResult{series.back(), fit_or_nan(full.times, series)};
        }));
    }
    return collect(eps_list, futures);
}

std::vector<MapRecord> stability_map(Range a_range, Range b_range, Range c_range, const SystemParams& base,
                                     const Grid& grid, int samples, std::uint64_t seed,
                                     const ConstantsRegistry& registry) {
    if (samples < 0) throw std::invalid_argument("stability_map: samples must be nonnegative");
    if (grid.interior() + 1 > kDefaultDimensionCap) {
        throw DomainError(ErrorCode::DimensionCap, "generator dimension " + std::to_string(grid.interior() + 1) +
                                                       " exceeds cap " + std::to_string(kDefaultDimensionCap));
    }
    validate_params(base);
    std::mt19937_64 rng(seed);
    auto draw = [&rng](Range r) { return r.lo + (r.hi - r.lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng); };
    std::vector<MapRecord> records(static_cast<std::size_t>(samples));
    for (auto& r : records) {
        r.a = draw(a_range);
        r.b = draw(b_range);
        r.c = draw(c_range);
    }
    std::vector<std::future<void>> jobs;
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w]() {
            for (std::size_t k = w; k < records.size(); k += workers) {
                MapRecord& r = records[k];
                SystemParams p = base;
                p.a = r.a;
                p.b = r.b;
                p.c = r.c;
                r.abscissa = spectral_abscissa(assemble_generator(p, grid));
                r.stable = r.abscissa < 0.0;
                r.pred_thm1 = predicate_thm1(r.a, r.b, r.c);
                r.pred_thm2 = predicate_thm2(r.a, r.b, r.c, registry);
                r.agree = r.stable == (base.regime == Regime::FastKdv ? r.pred_thm1 : r.pred_thm2);
            }
        }));
    }
    for (auto& j : jobs) j.get();
    return records;
}

}  // namespace kdvlab
