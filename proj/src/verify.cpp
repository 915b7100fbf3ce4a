#include "kdvlab/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "kdvlab/config.hpp"
#include "kdvlab/integrator.hpp"
#include "kdvlab/lyapunov.hpp"
#include "kdvlab/profiles.hpp"
#include "kdvlab/spectral.hpp"

namespace kdvlab {

namespace {

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
    try {
        CheckResult r = body();
        r.name = name;
        return r;
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : " ") + format_real(std::round(x * 1000.0) / 1000.0);
    return out;
}

bool all_at_least(const std::vector<double>& v, double bound) {
    for (double x : v) {
        if (!(x >= bound)) return false;
    }
    return !v.empty();
}

CheckResult profile_orders() {
    const double L = 3.0;
    std::vector<double> m_res, f_res;
    for (int n : {50, 100, 200}) {
        const Grid grid(L, n);
        m_res.push_back(profile_residuals(grid, 1.0).bvp_residual);
        f_res.push_back(steady_profile_residual(grid, 1.0));
    }
    const auto om = observed_orders(m_res);
    const auto of = observed_orders(f_res);
    const bool ok = all_at_least(om, 1.9) && all_at_least(of, 1.9) && std::abs(eval_M(0.0, 1.0, L)) < 1e-12 &&
                    std::abs(eval_M(L, 1.0, L)) < 1e-12;
    return {"", ok, "orders M: " + join(om) + ", f: " + join(of)};
}

CheckResult mms_orders(Regime regime) {
    const SystemParams p{0.3, -1.0, 0.5, 0.1, 3.0, regime};
    const ConvergenceReport rep =
        mms_convergence(p, polynomial_mms(p.L), 1.0, {25, 50, 100}, 1e-3, 100, {0.04, 0.02, 0.01});
    const bool ok = all_at_least(rep.spatial_orders, 1.9) && all_at_least(rep.temporal_orders, 1.9);
    return {"", ok, "spatial " + join(rep.spatial_orders) + ", temporal " + join(rep.temporal_orders)};
}

CheckResult energy_balance() {
    const SystemParams p{0.7, -1.0, 0.5, 1.0, 3.0, Regime::FastOde};
    std::vector<double> integrated;
    for (const auto& [n, dt] : {std::pair{50, 0.02}, std::pair{100, 0.01}, std::pair{200, 0.005}}) {
        const Grid grid(p.L, n);
        const auto shape = [&](double x) {
            return std::sin(std::numbers::pi * x / p.L) * std::sin(2.0 * std::numbers::pi * x / p.L) -
                   eval_f(x, p.a, p.L) * 0.5;
        };
        SimulationOptions dense;
        dense.snapshot_stride = 1;
        const Trajectory traj = simulate(p, grid, CoupledState::sampled(grid, shape, 0.5), 1.0, dt, {}, {}, dense);
        integrated.push_back(iss_balance_monitor(traj, p, grid, ConstantsRegistry::uniform_identity()).integrated);
    }
    std::vector<double> ratios;
    for (std::size_t k = 1; k < integrated.size(); ++k) ratios.push_back(integrated[k - 1] / integrated[k]);
    return {"", all_at_least(ratios, 3.0), "reduction per halving: " + join(ratios)};
}

CheckResult sandwiches(std::uint64_t seed) {
    const SystemParams p{0.2, -1.0, 0.5, 0.1, 3.0, Regime::FastOde};
    const Grid grid(p.L, 100);
    const ConstantsRegistry reg = ConstantsRegistry::uniform_identity();
    const NormBounds b1 = v1_equivalence(p, grid, reg);
    const NormBounds b2 = v2_equivalence(p, reg);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        CoupledState s = CoupledState::zero(grid);
        for (int i = 1; i < grid.intervals(); ++i) s.y[i] = normal(rng);
        s.z = normal(rng);
        const double e = eval_energy(s, grid);
        const double v1 = eval_V1(s, p, grid);
        const double v2 = eval_V2(s, p, grid, reg);
        const double tol = 1e-12 * e;
        if (v1 < b1.lower * e - tol || v1 > b1.upper * e + tol) ++violations;
        if (v2 < b2.lower * e - tol || v2 > b2.upper * e + tol) ++violations;
    }
    return {"", violations == 0, std::to_string(violations) + " violations in 400 comparisons"};
}

CheckResult critical_spectrum() {
    const double crit = spectral_abscissa(kdv_block(Grid(2.0 * std::numbers::pi, 100)));
    const double regular = spectral_abscissa(kdv_block(Grid(3.0, 100)));
    const bool ok = std::abs(crit) < 1e-2 && regular < 0.0;
    return {"", ok, "abscissa at 2π: " + format_real(crit) + ", at 3: " + format_real(regular)};
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed) {
    return {
        guarded("profile residual orders", profile_orders),
        guarded("MMS orders fast_kdv", [] { return mms_orders(Regime::FastKdv); }),
        guarded("MMS orders fast_ode", [] { return mms_orders(Regime::FastOde); }),
        guarded("energy balance", energy_balance),
        guarded("norm sandwiches", [seed] { return sandwiches(seed); }),
        guarded("critical-length spectrum", critical_spectrum),
    };
}

}  // namespace kdvlab
