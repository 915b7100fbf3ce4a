// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kdvlab/core.hpp"
#include "kdvlab/experiments.hpp"
#include "kdvlab/integrator.hpp"
#include "kdvlab/lyapunov.hpp"
#include "kdvlab/profiles.hpp"
#include "kdvlab/spectral.hpp"

using namespace kdvlab;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

class Report {
public:
    void run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= budget_s;
        const bool ok = o.passed && in_time;
        std::printf("[%s] criterion %2d  %-34s %s (%.2fs of %.0fs%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                    o.detail.c_str(), secs, budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
        failures_ += ok ? 0 : 1;
    }
    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string list(const std::vector<double>& v, const char* format = "%.3g") {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : " ") + fmt(format, x);
    return "[" + out + "]";
}

bool all_at_least(const std::vector<double>& v, double bound) {
    for (double x : v) {
        if (!(x >= bound)) return false;
    }
    return !v.empty();
}

std::vector<double> log2_ratios(const std::vector<double>& v) {
    std::vector<double> out;
    for (std::size_t k = 1; k < v.size(); ++k) out.push_back(std::log2(v[k - 1] / v[k]));
    return out;
}

std::vector<double> ratios(const std::vector<double>& v) {
    std::vector<double> out;
    for (std::size_t k = 1; k < v.size(); ++k) out.push_back(v[k - 1] / v[k]);
    return out;
}

/// Smooth state with y(0) = y(L) = 0 and y'(L) = a·z0.
CoupledState compatible_state(const Grid& grid, double a, double z0) {
    const double L = grid.length();
    const auto shape = bump_shape(1, L);
    return CoupledState::sampled(grid, [&](double x) { return shape(x) - eval_f(x, a, L) * z0; }, z0);
}

Outcome profile_identities() {
    const double L = 3.0;
    std::vector<double> m_res, f_res;
    for (int n : {100, 200, 400}) {
        const Grid grid(L, n);
        m_res.push_back(profile_residuals(grid, 1.0).bvp_residual);
        f_res.push_back(steady_profile_residual(grid, 1.0));
    }
    const double ends = std::max({std::abs(eval_M(0.0, 1.0, L)), std::abs(eval_M(L, 1.0, L)),
                                  std::abs(eval_f(0.0, 1.0, L)), std::abs(eval_f(L, 1.0, L))});
    const auto om = log2_ratios(m_res), of = log2_ratios(f_res);
    return {all_at_least(om, 1.9) && all_at_least(of, 1.9) && ends <= 1e-12,
            "orders M " + list(om) + " f " + list(of) + ", end values " + fmt("%.1e", ends)};
}

Outcome steady_state() {
    const double a = 0.7, z0 = 1.0, L = 3.0;
    const SystemParams p{a, 0.0, 0.0, 1.0, L, Regime::FastKdv};
    std::vector<double> drifts;
    bool bounded = true;
    std::string ratio_text;
    for (int n : {200, 400}) {
        const Grid grid(L, n);
        const ProfileSample h = sample_profile(grid, ProfileKind::SteadyH, a, z0);
        CoupledState ic = CoupledState::zero(grid);
        ic.y = h.values;
        ic.z = z0;
        const Trajectory traj = simulate(p, grid, ic, 1.0, 0.01);
        double drift = 0.0;
        for (int i = 0; i <= n; ++i) drift = std::max(drift, std::abs(traj.snapshots.back()[i] - h.values[i]));
        const double residual = steady_profile_residual(grid, a) * z0;
        if (n == 400) {
            bounded = drift <= 10.0 * residual;
            ratio_text = fmt("%.3g", drift / residual);
        }
        drifts.push_back(drift);
    }
    const double shrink = drifts[0] / drifts[1];
    return {bounded && shrink >= 3.0,
            "drift(n=400)/residual " + ratio_text + ", shrink on doubling " + fmt("%.2f", shrink)};
}

Outcome critical_degeneracy() {
    std::vector<double> crit;
    for (int n : {100, 200, 400}) crit.push_back(spectral_abscissa(kdv_block(Grid(2.0 * std::numbers::pi, n))));
    const bool toward_zero = std::abs(crit[1]) < std::abs(crit[0]) && std::abs(crit[2]) < std::abs(crit[1]);
    const double r300 = spectral_abscissa(kdv_block(Grid(3.0, 300)));
    const double r600 = spectral_abscissa(kdv_block(Grid(3.0, 600)));
    const double change = std::abs(r600 - r300) / std::abs(r300);
    return {std::abs(crit[2]) <= 1e-2 && toward_zero && r300 < 0.0 && r600 < 0.0 && change < 0.1,
            "2π abscissa " + list(crit, "%.2e") + ", L=3 " + fmt("%.5f", r300) + " -> " + fmt("%.5f", r600) +
                " (rel " + fmt("%.1e", change) + ")"};
}

Outcome mms_convergence_both() {
    bool ok = true;
    std::string detail;
    for (Regime r : {Regime::FastKdv, Regime::FastOde}) {
        const SystemParams p{0.3, -1.0, 0.5, 0.1, 3.0, r};
        const ConvergenceReport rep =
            mms_convergence(p, polynomial_mms(p.L), 1.0, {25, 50, 100}, 1e-3, 100, {0.04, 0.02, 0.01});
        ok = ok && all_at_least(rep.spatial_orders, 1.9) && all_at_least(rep.temporal_orders, 1.9);
        detail += std::string(to_string(r)) + " space " + list(rep.spatial_orders) + " time " +
                  list(rep.temporal_orders) + " ";
    }
    return {ok, detail};
}

Outcome energy_balance() {
    const std::vector<std::pair<int, double>> ladder = {{50, 0.02}, {100, 0.01}, {200, 0.005}};
    std::vector<double> free_run, forced_run;
    const SystemParams p{0.7, -1.0, 0.5, 0.5, 3.0, Regime::FastKdv};
    SimulationOptions dense;
    dense.snapshot_stride = 1;
    for (const auto& [n, dt] : ladder) {
        const Grid grid(p.L, n);
        const ConstantsRegistry reg = ConstantsRegistry::uniform_identity();
        const Trajectory traj = simulate(p, grid, compatible_state(grid, p.a, 0.5), 1.0, dt, {}, {}, dense);
        free_run.push_back(iss_balance_monitor(traj, p, grid, reg).integrated);

        const ManufacturedSolution m = polynomial_mms(p.L);
        const Disturbance d = mms_disturbance(m, p);
        const CoupledState ic = CoupledState::sampled(grid, [&](double x) { return m.u(0.0, x); }, 0.0);
        const Trajectory forced = simulate(p, grid, ic, 1.0, dt, d, {}, dense);
        forced_run.push_back(iss_balance_monitor(forced, p, grid, reg, d).integrated);
    }
    const auto rf = ratios(free_run), rd = ratios(forced_run);
    return {all_at_least(rf, 3.0) && all_at_least(rd, 3.0),
            "reduction per halving: coupled " + list(rf) + ", forced " + list(rd)};
}

Outcome regime1_stability() {
    bool ok = true;
    std::string detail;
    for (double eps : {0.2, 0.1, 0.05}) {
        const SystemParams p{0.1, -1.0, 1.0, eps, 3.0, Regime::FastKdv};
        const Grid grid(p.L, 200);
        const double abscissa = spectral_abscissa(assemble_generator(p, grid));
        const Trajectory traj =
            simulate(p, grid, compatible_state(grid, p.a, 1.0), 10.0, eps / 20.0, {}, {make_observer("V1", p, grid)});
        const DecayFit fit = fit_decay(traj.times, traj.functionals.at("V1"));
        // V1 is quadratic in the state, so its rate is twice the state rate.
        const double rate = fit.mu_hat / 2.0;
        const double rel = std::abs(rate + abscissa) / std::abs(abscissa);
        ok = ok && abscissa < 0.0 && fit.mu_hat > 0.0 && rel <= 0.25;
        detail += "eps " + fmt("%g", eps) + ": abscissa " + fmt("%.4f", abscissa) + " rate " + fmt("%.4f", rate) +
                  " (" + fmt("%.1f", 100.0 * rel) + "%) ";
    }
    return {ok, detail};
}

Outcome regime2_stability() {
    bool ok = true;
    std::string detail;
    const ConstantsRegistry reg = ConstantsRegistry::uniform_identity();
    for (double eps : {0.2, 0.1}) {
        const SystemParams p{0.2, -1.0, 0.5, eps, 3.0, Regime::FastOde};
        const Grid grid(p.L, 200);
        const double dt = 0.005;
        const double abscissa = spectral_abscissa(assemble_generator(p, grid));
        const Trajectory traj =
            simulate(p, grid, compatible_state(grid, p.a, 1.0), 10.0, dt, {}, {make_observer("V2", p, grid, reg)});
        const std::vector<double>& v = traj.functionals.at("V2");
        const double h = grid.spacing();
        double worst = -1e300;
        for (std::size_t k = v.size() / 5; k + 1 < v.size(); ++k) worst = std::max(worst, (v[k + 1] - v[k]) / v[k]);
        const double slack = h * h + dt * dt;
        ok = ok && abscissa < 0.0 && worst <= slack;
        detail += "eps " + fmt("%g", eps) + ": abscissa " + fmt("%.4f", abscissa) + " max step increase " +
                  fmt("%.2e", worst) + "·V2 ";
    }
    return {ok, detail + "(slack h²+dt² = " + fmt("%.2e", std::pow(3.0 / 200, 2) + 0.005 * 0.005) + ")"};
}

bool monotone_with_one_inversion(const std::vector<double>& errors) {
    int inversions = 0;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (!(errors[k] < errors[k - 1])) inversions += (k == 1) ? 1 : 2;
    }
    return inversions <= 1;
}

Outcome tikhonov_r1() {
    const SystemParams p{0.1, -1.0, 1.0, 0.1, 3.0, Regime::FastKdv};
    const SweepReport rep =
        tikhonov_sweep_r1(default_base_shapes(p.L), p, {0.2, 0.1, 0.05, 0.025}, 1.0, Grid(p.L, 200));
    return {rep.fit.slope >= 0.8 && rep.fit.r_squared >= 0.95 && monotone_with_one_inversion(rep.errors),
            "errors " + list(rep.errors) + " slope " + fmt("%.3f", rep.fit.slope) + " r² " +
                fmt("%.4f", rep.fit.r_squared)};
}

Outcome tikhonov_r2() {
    const SystemParams p{0.2, -1.0, 0.5, 0.1, 3.0, Regime::FastOde};
    const SweepReport rep = tikhonov_sweep_r2(default_base_shapes(p.L), p, {0.2, 0.1, 0.05}, 1.0, Grid(p.L, 200));
    return {rep.fit.slope >= 0.8 && rep.fit.r_squared >= 0.9 && monotone_with_one_inversion(rep.errors),
            "errors " + list(rep.errors) + " slope " + fmt("%.3f", rep.fit.slope) + " r² " +
                fmt("%.4f", rep.fit.r_squared)};
}

Outcome norm_sandwiches() {
    const ConstantsRegistry reg = ConstantsRegistry::uniform_identity();
    const SystemParams p1{0.1, -1.0, 1.0, 0.1, 3.0, Regime::FastKdv};
    const SystemParams p2{0.2, -1.0, 0.5, 0.1, 3.0, Regime::FastOde};
    const Grid grid(3.0, 100);
    const NormBounds b1 = v1_equivalence(p1, grid, reg);
    const NormBounds b2 = v2_equivalence(p2, reg);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    int v1_bad = 0, v2_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        // Random amplitude split between y and z exercises both ends of the sandwich.
        const double sy = std::pow(10.0, scale(rng)), sz = std::pow(10.0, scale(rng));
        CoupledState s = CoupledState::zero(grid);
        for (int i = 1; i < grid.intervals(); ++i) s.y[i] = sy * normal(rng);
        s.z = sz * normal(rng);
        const double e = eval_energy(s, grid);
        const double tol = 1e-12 * e;
        const double v1 = eval_V1(s, p1, grid);
        const double v2 = eval_V2(s, p2, grid, reg);
        v1_bad += (v1 < b1.lower * e - tol || v1 > b1.upper * e + tol) ? 1 : 0;
        v2_bad += (v2 < b2.lower * e - tol || v2 > b2.upper * e + tol) ? 1 : 0;
    }
    return {v1_bad == 0 && v2_bad == 0, "violations V1 " + std::to_string(v1_bad) + "/1000, V2 " +
                                            std::to_string(v2_bad) + "/1000 (nu1 " + fmt("%.4g", b1.lower) + ".." +
                                            fmt("%.4g", b1.upper) + ")"};
}

Outcome dissipativity() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Grid grid(3.0, 200);
    double worst = -1e300;
    for (int draw = 0; draw < 5; ++draw) {
        const double a = u(rng), b = u(rng) - 0.5, c = u(rng);
        const SystemParams p{a, b, c, 1.0, 3.0, Regime::FastKdv};
        const GeneratorMatrix G = assemble_generator(p, grid);
        worst = std::max(worst, quadratic_form_bound(G, 1000, dissipativity_constant(a, b, c), 100 + draw));
    }
    return {worst <= grid.spacing(), "worst slack " + fmt("%.3e", worst) + " vs h = " + fmt("%.3e", grid.spacing())};
}

}  // namespace

int main() {
    Report report;
    report.run(1, "profile identities", 1, profile_identities);
    report.run(2, "steady-state preservation", 5, steady_state);
    report.run(3, "critical-length degeneracy", 30, critical_degeneracy);
    report.run(4, "MMS convergence", 30, mms_convergence_both);
    report.run(5, "energy-balance identity", 10, energy_balance);
    report.run(6, "regime-1 stability", 60, regime1_stability);
    report.run(7, "regime-2 stability", 60, regime2_stability);
    report.run(8, "Tikhonov rate, regime 1", 180, tikhonov_r1);
    report.run(9, "Tikhonov rate, regime 2", 180, tikhonov_r2);
    report.run(10, "norm sandwiches", 1, norm_sandwiches);
    report.run(11, "dissipativity bound", 5, dissipativity);
    std::printf("%d of 11 criteria failed\n", report.failures());
    return report.failures() == 0 ? 0 : 1;
}
