#include "kdvlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "kdvlab/critical_lengths.hpp"
#include "kdvlab/errors.hpp"
#include "kdvlab/experiments.hpp"
#include "kdvlab/integrator.hpp"
#include "kdvlab/kdv_operator.hpp"
#include "kdvlab/lyapunov.hpp"
#include "kdvlab/profiles.hpp"
#include "kdvlab/spectral.hpp"
#include "kdvlab/verify.hpp"

namespace kdvlab {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string RunManifest::canonical_text() const {
    std::ostringstream os;
    os << "version=" << kVersion << '\n' << "subcommand=" << subcommand << '\n';
    os << "allow_critical=" << (allow_critical ? 1 : 0) << '\n';
    for (const auto& key : config_keys()) os << key << '=' << format_value(config, key) << '\n';
    for (const auto& [k, v] : options) os << "option." << k << '=' << v << '\n';
    return os.str();
}

std::string RunManifest::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text())));
    return buf;
}

std::string RunManifest::file_text() const {
    std::ostringstream os;
    os << canonical_text() << "output_dir=" << output_dir << '\n'
       << "wall_clock_seconds=" << format_real(wall_clock_seconds) << '\n' << "hash=" << hash() << '\n';
    return os.str();
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// CSV table: metadata comments, header, rows. Reals use the shortest round-trip form.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void comment(const std::string& text) { comments_.push_back(text); }
    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(format_real(v));
        rows_.push_back(std::move(cells));
    }
    void row_text(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    void write(std::ostream& os, const RunManifest& manifest) const {
        os << "# kdvlab " << kVersion << " manifest=" << manifest.hash() << '\n';
        for (const auto& c : comments_) os << "# " << c << '\n';
        write_line(os, columns_);
        for (const auto& r : rows_) write_line(os, r);
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

/// Collects tables and writes them to stdout or into the output directory.
class Emitter {
public:
    Emitter(RunManifest& manifest, std::ostream& out) : manifest_(manifest), out_(out) {}

    void add(const std::string& name, Table table, bool stdout_too = true) {
        files_.emplace_back(name, std::move(table), stdout_too);
    }

    void finish(double seconds) {
        manifest_.wall_clock_seconds = seconds;
        if (manifest_.output_dir.empty()) {
            for (const auto& [name, table, show] : files_) {
                if (show) table.write(out_, manifest_);
            }
            return;
        }
        namespace fs = std::filesystem;
        const fs::path dir(manifest_.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw UsageError("cannot create output directory '" + manifest_.output_dir + "': " + ec.message());
        for (const auto& [name, table, show] : files_) {
            std::ofstream f(dir / name);
            if (!f) throw UsageError("cannot write '" + (dir / name).string() + "'");
            table.write(f, manifest_);
        }
        std::ofstream m(dir / "manifest.txt");
        m << manifest_.file_text();
        out_ << "wrote " << files_.size() << " file(s) and manifest.txt to " << manifest_.output_dir << '\n';
    }

private:
    RunManifest& manifest_;
    std::ostream& out_;
    std::vector<std::tuple<std::string, Table, bool>> files_;
};

SystemParams checked(const RunConfig& config, bool allow_critical) {
    if (allow_critical) {
        if (!(config.params.epsilon > 0.0)) throw DomainError(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
        if (!(config.params.L > 0.0)) throw DomainError(ErrorCode::NonPositiveLength, "L must be positive");
        return config.params;
    }
    return validate_params(config.params);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        RunConfig scratch;
        try {
            apply_setting(scratch, "dt", item.empty() ? "x" : item);
        } catch (const DomainError&) {
            throw UsageError(what + ": cannot read '" + item + "' as a positive number");
        }
        out.push_back(scratch.dt);
    }
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

Range parse_range(const std::string& text, const std::string& what) {
    const auto comma = text.find(',');
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError(what + ": expected lo,hi (got '" + text + "')");
        return v;
    };
    if (comma == std::string::npos) throw UsageError(what + ": expected lo,hi (got '" + text + "')");
    Range r{num(text.substr(0, comma)), num(text.substr(comma + 1))};
    if (r.lo > r.hi) throw UsageError(what + ": lo must not exceed hi");
    return r;
}

/// Piecewise-linear d2(t) from a CSV of (t, d2) rows; constant beyond the ends.
std::function<double(double)> load_d2_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open disturbance file '" + path + "'");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t = 0.0, v = 0.0;
        if (!(ls >> t >> v)) continue;  // header or malformed row
        pts.emplace_back(t, v);
    }
    if (pts.empty()) throw UsageError("disturbance file '" + path + "' has no (t, d2) rows");
    std::sort(pts.begin(), pts.end());
    return [pts](double t) {
        if (t <= pts.front().first) return pts.front().second;
        if (t >= pts.back().first) return pts.back().second;
        const auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(t, -1e308));
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    };
}

void run_critical_lengths(double max_length, Emitter& emit) {
    Table t({"k", "l", "value"});
    for (const auto& c : critical_lengths_up_to(max_length)) {
        t.row_text({std::to_string(c.k), std::to_string(c.l), format_real(c.value)});
    }
    emit.add("critical_lengths.csv", std::move(t));
}

void run_profiles(const RunConfig& config, bool allow_critical, Emitter& emit) {
    const SystemParams p = checked(config, allow_critical);
    const Grid grid(p.L, config.n);
    const auto M = sample_profile(grid, ProfileKind::M, p.c);
    const auto f = sample_profile(grid, ProfileKind::F, p.a);
    const auto h = sample_profile(grid, ProfileKind::SteadyH, p.a, 1.0);
    const ProfileResiduals res = profile_residuals(grid, p.c);
    Table t({"x", "M", "f", "h_at_z1"});
    t.comment("K=" + format_real(coupling_constant_K(p.a, p.c, p.L)));
    t.comment("M_norm_sq=" + format_real(norm_sq_M(p.c, p.L)));
    t.comment("M_bvp_residual=" + format_real(res.bvp_residual) + " M_x(0)=" + format_real(res.left_trace) +
              " M_x(L)=" + format_real(res.right_trace));
    t.comment("f_bvp_residual=" + format_real(steady_profile_residual(grid, p.a)));
    for (int i = 0; i <= grid.intervals(); ++i) t.row({grid.node(i), M.values[i], f.values[i], h.values[i]});
    emit.add("profiles.csv", std::move(t));
}

void run_simulate(const RunConfig& config, bool allow_critical, Emitter& emit) {
    const SystemParams p = checked(config, allow_critical);
    const Grid grid(p.L, config.n);
    const WeightChoice weight = config.weight_beta > 0.0 ? WeightChoice::affine(config.weight_beta) : WeightChoice{};
    const ConstantsRegistry registry = ConstantsRegistry::for_weight(weight, p.L);

    Disturbance disturbance;
    std::optional<ManufacturedSolution> exact;
    CoupledState ic;
    if (config.disturbance == "mms") {
        exact = polynomial_mms(p.L);
        disturbance = mms_disturbance(*exact, p);
        ic = CoupledState::sampled(grid, [&](double x) { return exact->u(0.0, x); }, 0.0);
    } else {
        if (config.disturbance == "file") {
            if (config.disturbance_file.empty()) throw UsageError("disturbance=file needs disturbance_file");
            disturbance.d2 = load_d2_file(config.disturbance_file);
        }
        const auto shape = bump_shape(1, p.L);
        const double z0 = 1.0;
        const bool regular = std::abs(std::sin(p.L / 2.0)) >= kSingularProfileTol;
        ic = CoupledState::sampled(
            grid, [&](double x) { return shape(x) - (regular ? eval_f(x, p.a, p.L) * z0 : 0.0); }, z0);
    }

    std::vector<Observer> observers;
    std::vector<std::string> names = {"energy", "W"};
    if (std::abs(std::sin(p.L / 2.0)) >= kSingularProfileTol) names.push_back("V1");
    if (p.b < 0.0) names.push_back("V2");
    if (p.b < 0.0 && p.regime == Regime::FastOde) names.push_back("V3");
    for (const auto& name : names) observers.push_back(make_observer(name, p, grid, registry, weight));
    if (exact) {
        const ManufacturedSolution m = *exact;
        observers.push_back({"mms_error", [m, grid](const CoupledState& s) {
                                 std::vector<double> e(s.y.size());
                                 for (int i = 0; i <= grid.intervals(); ++i) e[i] = s.y[i] - m.u(s.t, grid.node(i));
                                 return std::sqrt(l2_norm_sq(e, grid.spacing()));
                             }});
        names.push_back("mms_error");
    }

    SimulationOptions options;
    options.snapshot_stride = config.snapshot_stride;
    const Trajectory traj = simulate(p, grid, ic, config.T, config.dt, disturbance, observers, options);

    std::vector<std::string> columns = {"t", "z", "yx0"};
    columns.insert(columns.end(), names.begin(), names.end());
    std::vector<double> iss;
    if (traj.dense()) {
        const IssReport rep = iss_balance_monitor(traj, p, grid, registry, disturbance, weight);
        iss.push_back(0.0);
        iss.insert(iss.end(), rep.residual.begin(), rep.residual.end());
        columns.push_back("iss_residual");
    }
    Table t(columns);
    t.comment("regime=" + std::string(to_string(p.regime)) + " steps=" + std::to_string(traj.size() - 1));
    if (!iss.empty()) t.comment("iss_residual at row k refers to the interval ending at row k");
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<double> row = {traj.times[k], traj.z[k], traj.yx0[k]};
        for (const auto& name : names) row.push_back(traj.functionals.at(name)[k]);
        if (!iss.empty()) row.push_back(iss[k]);
        t.row(row);
    }
    emit.add("trajectory.csv", std::move(t));

    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        Table snap({"x", "y"});
        snap.comment("t=" + format_real(traj.snapshot_times[s]));
        for (int i = 0; i <= grid.intervals(); ++i) snap.row({grid.node(i), traj.snapshots[s][i]});
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%05zu.csv", s);
        emit.add(name, std::move(snap), false);
    }
}

void run_spectrum(const RunConfig& config, bool allow_critical, Emitter& emit) {
    const SystemParams p = checked(config, allow_critical);
    const Grid grid(p.L, config.n);
    const GeneratorMatrix G = assemble_generator(p, grid, allow_critical);
    auto ev = spectrum(G.matrix);
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    Table t({"re", "im"});
    t.comment("abscissa=" + format_real(ev.empty() ? 0.0 : ev.front().real()));
    t.comment("dimension=" + std::to_string(G.dimension()));
    for (const auto& z : ev) t.row({z.real(), z.imag()});
    emit.add("spectrum.csv", std::move(t));
}

void run_sweep(const RunConfig& config, int regime, const std::vector<double>& eps, double t_eval, double fraction,
               Emitter& emit) {
    SystemParams p = config.params;
    p.regime = regime == 1 ? Regime::FastKdv : Regime::FastOde;
    p.epsilon = eps.front();
    validate_params(p);
    const Grid grid(p.L, config.n);
    const BaseShapes shapes = default_base_shapes(p.L);
    const DtRule rule{fraction};
    const SweepReport rep = regime == 1 ? tikhonov_sweep_r1(shapes, p, eps, t_eval, grid, rule)
                                        : tikhonov_sweep_r2(shapes, p, eps, t_eval, grid, rule);
    Table t({"eps", "error", "mu_hat"});
    t.comment("regime=" + std::to_string(regime) + " t_eval=" + format_real(t_eval));
    if (eps.size() >= 2) {
        t.comment("slope=" + format_real(rep.fit.slope) + " r_squared=" + format_real(rep.fit.r_squared));
    }
    for (std::size_t k = 0; k < eps.size(); ++k) t.row({rep.eps_values[k], rep.errors[k], rep.mu_hat[k]});
    emit.add("sweep.csv", std::move(t));
}

void run_stability_map(const RunConfig& config, Range ar, Range br, Range cr, int samples, Emitter& emit) {
    const SystemParams p = validate_params(config.params);
    const Grid grid(p.L, config.n);
    const auto records = stability_map(ar, br, cr, p, grid, samples, config.seed);
    Table t({"a", "b", "c", "abscissa", "pred_thm1", "pred_thm2", "agree"});
    t.comment("regime=" + std::string(to_string(p.regime)) + " epsilon=" + format_real(p.epsilon));
    for (const auto& r : records) {
        t.row_text({format_real(r.a), format_real(r.b), format_real(r.c), format_real(r.abscissa),
                    r.pred_thm1 ? "1" : "0", r.pred_thm2 ? "1" : "0", r.agree ? "1" : "0"});
    }
    emit.add("stability_map.csv", std::move(t));
}

bool run_verify(std::uint64_t seed, std::ostream& out) {
    const auto results = run_verification(seed);
    std::size_t width = 5;
    for (const auto& r : results) width = std::max(width, r.name.size());
    bool all = true;
    for (const auto& r : results) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << r.name << (r.passed ? "PASS  " : "FAIL  ")
            << r.detail << '\n';
        all = all && r.passed;
    }
    out << (all ? "all checks passed" : "some checks failed") << '\n';
    return all;
}

std::string env_help() {
    std::string keys;
    for (const auto& k : config_keys()) keys += (keys.empty() ? "" : ", ") + k;
    return "Configuration: defaults < --config file (key = value lines, # comments) < environment variables "
           "KDVLAB_<KEY> (key upper-cased, e.g. KDVLAB_EPSILON) < command-line flags.\nConfig keys: " +
           keys + "\nExit codes: 0 success, 1 domain error, 2 usage error.";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    const auto started = std::chrono::steady_clock::now();
    CLI::App app{"Two-time-scale KdV/ODE cascade laboratory", "kdvlab"};
    app.footer(env_help());
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    bool allow_critical = false;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory (CSV files and manifest.txt); stdout when absent");
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--allow-critical", allow_critical, "skip the critical-length check (for degeneracy studies)");
    std::map<std::string, std::string> flag_values;
    for (const auto& key : config_keys()) {
        if (key == "seed" || key == "regime") continue;
        app.add_option("--" + key, flag_values[key], "config key " + key);
    }
    std::string regime_flag;
    app.add_option("--regime", regime_flag, "config key regime (1 | 2 | fast_kdv | fast_ode)");

    double max_length = 20.0;
    auto* crit = app.add_subcommand("critical-lengths", "enumerate critical lengths up to --max");
    crit->add_option("--max", max_length, "largest length")->capture_default_str();
    auto* prof = app.add_subcommand("profiles", "sample M, f and the steady profile; report residuals and K");
    auto* sim = app.add_subcommand("simulate", "integrate the coupled system; trajectory CSV and snapshots");
    auto* spec = app.add_subcommand("spectrum", "eigenvalues of the discretized generator");
    int sweep_regime = 1;
    std::string eps_text;
    double t_eval = 1.0, dt_fraction = 1.0 / 20.0;
    auto* sweep = app.add_subcommand("sweep", "Tikhonov error sweep over epsilon");
    sweep->add_option("--regime", sweep_regime, "1 (fast KdV) or 2 (fast ODE)")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    sweep->add_option("--eps", eps_text, "comma-separated epsilons (default 0.2,0.1,0.05,0.025 or 0.2,0.1,0.05)");
    sweep->add_option("--t-eval", t_eval, "evaluation time")->capture_default_str();
    sweep->add_option("--dt-fraction", dt_fraction, "dt = min(eps, 1) * fraction")->capture_default_str();
    std::string a_range = "-1,1", b_range = "-2,1", c_range = "-1,1";
    int samples = 20;
    auto* map = app.add_subcommand("stability-map", "classify random (a, b, c) by spectral abscissa");
    map->add_option("--a-range", a_range, "lo,hi")->capture_default_str();
    map->add_option("--b-range", b_range, "lo,hi")->capture_default_str();
    map->add_option("--c-range", c_range, "lo,hi")->capture_default_str();
    map->add_option("--samples", samples, "number of samples")->capture_default_str()->check(CLI::NonNegativeNumber);
    auto* ver = app.add_subcommand("verify", "run the built-in property suite");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\nrun 'kdvlab --help' for subcommands and config keys\n";
        return 2;
    }

    try {
        RunManifest manifest;
        RunConfig& config = manifest.config;
        if (!config_path.empty()) apply_config_file(config, config_path);
        const EnvLookup lookup = env ? env : [](const char* name) -> const char* { return std::getenv(name); };
        apply_environment(config, lookup);
        for (const auto& key : config_keys()) {
            if (key == "seed" || key == "regime") continue;
            if (app.count("--" + key) > 0) apply_setting(config, key, flag_values[key]);
        }
        if (app.count("--regime") > 0) apply_setting(config, "regime", regime_flag);
        if (seed) config.seed = *seed;
        manifest.allow_critical = allow_critical;
        manifest.output_dir = out_dir;
        Emitter emit(manifest, out);

        if (*crit) {
            manifest.subcommand = "critical-lengths";
            manifest.options["max"] = format_real(max_length);
            if (!(max_length > 0.0)) throw UsageError("--max must be positive");
            run_critical_lengths(max_length, emit);
        } else if (*prof) {
            manifest.subcommand = "profiles";
            run_profiles(config, allow_critical, emit);
        } else if (*sim) {
            manifest.subcommand = "simulate";
            run_simulate(config, allow_critical, emit);
        } else if (*spec) {
            manifest.subcommand = "spectrum";
            run_spectrum(config, allow_critical, emit);
        } else if (*sweep) {
            manifest.subcommand = "sweep";
            if (eps_text.empty()) eps_text = sweep_regime == 1 ? "0.2,0.1,0.05,0.025" : "0.2,0.1,0.05";
            const std::vector<double> eps = parse_list(eps_text, "--eps");
            manifest.options["regime"] = std::to_string(sweep_regime);
            manifest.options["eps"] = eps_text;
            manifest.options["t_eval"] = format_real(t_eval);
            manifest.options["dt_fraction"] = format_real(dt_fraction);
            if (!(t_eval > 0.0) || !(dt_fraction > 0.0)) throw UsageError("--t-eval and --dt-fraction must be positive");
            run_sweep(config, sweep_regime, eps, t_eval, dt_fraction, emit);
        } else if (*map) {
            manifest.subcommand = "stability-map";
            manifest.options["a_range"] = a_range;
            manifest.options["b_range"] = b_range;
            manifest.options["c_range"] = c_range;
            manifest.options["samples"] = std::to_string(samples);
            run_stability_map(config, parse_range(a_range, "--a-range"), parse_range(b_range, "--b-range"),
                              parse_range(c_range, "--c-range"), samples, emit);
        } else if (*ver) {
            manifest.subcommand = "verify";
            if (!run_verify(config.seed, out)) {
                err << to_string(ErrorCode::VerificationFailed) << ": at least one check failed\n";
                return 1;
            }
            return 0;
        }
        emit.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::InvalidConfig ? 2 : 1;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace kdvlab
