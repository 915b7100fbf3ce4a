#include "kdvlab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kdvlab/errors.hpp"
#include "kdvlab/kdv_operator.hpp"
#include "kdvlab/profiles.hpp"

namespace kdvlab {

namespace {

void require_negative_b(const SystemParams& p, const char* what) {
    if (!(p.b < 0.0)) throw DomainError(ErrorCode::NonNegativeB, std::string(what) + " needs b < 0");
}

}  // namespace

WeightChoice WeightChoice::affine(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("affine weight needs beta > 0");
    return {Kind::Affine, beta};
}

ConstantsRegistry ConstantsRegistry::for_weight(const WeightChoice& weight, double L) {
    ConstantsRegistry r;
    r.c_lower = weight.lower_bound();
    r.c_upper = weight.upper_bound(L);
    return r;
}

void ConstantsRegistry::validate() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("registry: lambda must be >= 0");
    if (!(kappa1 > 0.0 && kappa2 > 0.0 && kappa3 > 0.0)) throw std::invalid_argument("registry: kappas must be > 0");
    if (!(c_lower > 0.0 && c_lower <= c_upper)) throw std::invalid_argument("registry: need 0 < c_lower <= c_upper");
}

double eval_energy(const CoupledState& state, const Grid& grid) {
    return l2_norm_sq(state.y, grid.spacing()) + state.z * state.z;
}

double eval_W(std::span<const double> y, const Grid& grid, const WeightChoice& weight) {
    if (static_cast<int>(y.size()) != grid.intervals() + 1) throw std::invalid_argument("eval_W: size mismatch");
    const int n = grid.intervals();
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * weight(grid.node(i)) * y[i] * y[i];
    }
    return sum * grid.spacing();
}

double eval_V1(const CoupledState& state, const SystemParams& params, const Grid& grid, const WeightChoice& weight) {
    const ProfileSample M = sample_profile(grid, ProfileKind::M, params.c);
    const double eps = params.epsilon;
    const double gap = eps * l2_dot(M.values, state.y, grid.spacing()) - state.z;
    return eps * eval_W(state.y, grid, weight) + 0.5 * gap * gap;
}

NormBounds v1_equivalence(const SystemParams& params, const Grid& grid, const ConstantsRegistry& registry) {
    const ProfileSample M = sample_profile(grid, ProfileKind::M, params.c);
    const double m2 = l2_norm_sq(M.values, grid.spacing());
    const double eps = params.epsilon;
    const double cl = registry.c_lower;
    NormBounds out;
    out.lower = std::min(cl * eps / 2.0, 0.5 * cl * eps / (eps * eps * m2 + cl * eps));
    out.upper = std::max(eps * registry.c_upper + eps * eps * m2, 1.0);
    return out;
}

double eval_V2(const CoupledState& state, const SystemParams& params, const Grid& grid,
               const ConstantsRegistry& registry, const WeightChoice& weight) {
    require_negative_b(params, "V2");
    const double coef = -params.epsilon * registry.kappa2 * params.a * params.a / params.b;
    return coef * state.z * state.z + eval_W(state.y, grid, weight);
}

NormBounds v2_equivalence(const SystemParams& params, const ConstantsRegistry& registry) {
    require_negative_b(params, "V2");
    const double coef = -params.epsilon * registry.kappa2 * params.a * params.a / params.b;
    return {std::min(registry.c_lower, coef), std::max(registry.c_upper, coef)};
}

double eval_V3(std::span<const double> v, double z_tilde, const SystemParams& params, const Grid& grid,
               const ConstantsRegistry& registry, const WeightChoice& weight) {
    require_negative_b(params, "V3");
    const double coef = -params.epsilon * registry.kappa2 * params.a * params.a * params.b;
    return eval_W(v, grid, weight) + coef * z_tilde * z_tilde;
}

double eval_V4(std::span<const double> v_hat, double z_hat, const SystemParams& params, const Grid& grid,
               const ConstantsRegistry& registry, const WeightChoice& weight) {
    require_negative_b(params, "V4");
    const double coef = -3.0 * params.epsilon * registry.kappa2 * params.a * params.a * params.b;
    return eval_W(v_hat, grid, weight) + coef * z_hat * z_hat;
}

NormBounds v4_equivalence(const SystemParams& params, const ConstantsRegistry& registry) {
    require_negative_b(params, "V4");
    const double coef = -3.0 * params.epsilon * registry.kappa2 * params.a * params.a * params.b;
    return {std::min(registry.c_lower, coef), std::max(registry.c_upper, coef)};
}

double z_tilde(const CoupledState& state, const SystemParams& params, const Grid& grid) {
    if (params.b == 0.0) throw DomainError(ErrorCode::ZeroB, "z-tilde needs b != 0");
    return state.z + params.c / params.b * trace_yx0(state, grid);
}

IssReport iss_balance_monitor(const Trajectory& traj, const SystemParams& params, const Grid& grid,
                              const ConstantsRegistry& registry, const Disturbance& disturbance,
                              const WeightChoice& weight) {
    if (!traj.dense() && !traj.times.empty()) {
        throw DomainError(ErrorCode::DenseSnapshotsRequired, "energy-balance monitor needs a snapshot at every sample");
    }
    const double h = grid.spacing();
    const double s = params.pde_scale();
    const bool uniform = weight.kind == WeightChoice::Kind::Uniform;
    const int n = grid.intervals();

    // Right-hand side of the balance (uniform) or of the ISS estimate at sample k.
    auto rhs = [&](std::size_t k) {
        const std::vector<double>& y = traj.snapshots[k];
        const double t = traj.times[k];
        const double d2 = disturbance.has_d2() ? disturbance.eval_d2(t) : params.a * traj.z[k];
        const double yx0 = (4.0 * y[1] - y[2]) / (2.0 * h);
        double d1y = 0.0;
        double d1sq = 0.0;
        if (disturbance.has_d1()) {
            std::vector<double> d1(y.size());
            for (int i = 0; i <= n; ++i) d1[i] = disturbance.eval_d1(t, grid.node(i));
            d1y = l2_dot(d1, y, h);
            d1sq = l2_norm_sq(d1, h);
        }
        if (uniform) return s * (d2 * d2 - yx0 * yx0 + 2.0 * d1y);
        return s * (-registry.lambda * l2_norm_sq(y, h) + registry.kappa1 * d1sq + registry.kappa2 * d2 * d2 -
                    registry.kappa3 * yx0 * yx0);
    };

    IssReport report;
    if (traj.size() < 2) return report;
    double prev_w = eval_W(traj.snapshots[0], grid, weight);
    double prev_rhs = rhs(0);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double dt = traj.times[k] - traj.times[k - 1];
        const double w = eval_W(traj.snapshots[k], grid, weight);
        const double r = rhs(k);
        const double lhs = (w - prev_w) / dt;
        const double avg = 0.5 * (r + prev_rhs);
        const double value = uniform ? std::abs(lhs - avg) : lhs - avg;
        report.times.push_back(0.5 * (traj.times[k] + traj.times[k - 1]));
        report.residual.push_back(value);
        report.integrated += std::abs(value) * dt;
        prev_w = w;
        prev_rhs = r;
    }
    return report;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double transient) {
    if (times.size() != values.size()) throw std::invalid_argument("fit_decay: size mismatch");
    if (!(transient >= 0.0 && transient < 1.0)) throw std::invalid_argument("fit_decay: transient must be in [0, 1)");
    const std::size_t start = static_cast<std::size_t>(std::floor(transient * static_cast<double>(times.size())));
    const std::size_t count = times.size() - start;
    if (count < kMinFitSamples) {
        throw std::invalid_argument("fit_decay: fewer than " + std::to_string(kMinFitSamples) +
                                    " samples after the transient");
    }
    double st = 0.0, sv = 0.0;
    std::vector<double> logs(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double v = values[start + k];
        if (!(v > 0.0)) {
            throw DomainError(ErrorCode::NonPositiveValues,
                              "value " + std::to_string(v) + " at t = " + std::to_string(times[start + k]));
        }
        logs[k] = std::log(v);
        st += times[start + k];
        sv += logs[k];
    }
    const double mt = st / count;
    const double mv = sv / count;
    double stt = 0.0, stv = 0.0, svv = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double dt = times[start + k] - mt;
        const double dv = logs[k] - mv;
        stt += dt * dt;
        stv += dt * dv;
        svv += dv * dv;
    }
    if (!(stt > 0.0)) throw std::invalid_argument("fit_decay: times must not all coincide");
    const double slope = stv / stt;
    DecayFit fit;
    fit.mu_hat = -slope;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double e = logs[k] - (mv + slope * (times[start + k] - mt));
        ss_res += e * e;
    }
    fit.r_squared = svv > 0.0 ? 1.0 - ss_res / svv : 1.0;
    return fit;
}

Observer make_observer(const std::string& name, const SystemParams& params, const Grid& grid,
                       const ConstantsRegistry& registry, const WeightChoice& weight) {
    if (name == "energy") return {name, [grid](const CoupledState& s) { return eval_energy(s, grid); }};
    if (name == "W") return {name, [grid, weight](const CoupledState& s) { return eval_W(s.y, grid, weight); }};
    if (name == "V1") {
        const ProfileSample M = sample_profile(grid, ProfileKind::M, params.c);
        const double eps = params.epsilon;
        return {name, [grid, weight, M, eps](const CoupledState& s) {
                    const double gap = eps * l2_dot(M.values, s.y, grid.spacing()) - s.z;
                    return eps * eval_W(s.y, grid, weight) + 0.5 * gap * gap;
                }};
    }
    if (name == "V2") {
        require_negative_b(params, "V2");
        return {name, [=](const CoupledState& s) { return eval_V2(s, params, grid, registry, weight); }};
    }
    if (name == "V3") {
        require_negative_b(params, "V3");
        if (params.regime != Regime::FastOde) throw std::invalid_argument("V3 observer needs the FastOde regime");
        const SpatialOperator op(grid, params.a);
        return {name, [=](const CoupledState& s) {
                    const std::vector<double> v = compute_v(s.y, params.a * s.z, params.epsilon, op);
                    return eval_V3(v, z_tilde(s, params, grid), params, grid, registry, weight);
                }};
    }
    throw std::invalid_argument("unknown observer '" + name + "' (valid: energy, W, V1, V2, V3)");
}

}  // namespace kdvlab
