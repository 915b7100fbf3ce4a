#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kdvlab {

/// Which equation carries the time-scale ratio ε.
///   FastKdv: ε y_t + y_x + y_xxx = 0,  ż = b z + c y_x(t,0)
///   FastOde: y_t + y_x + y_xxx = 0,    ε ż = b z + c y_x(t,0)
/// Both share y(t,0) = y(t,L) = 0 and y_x(t,L) = a z(t).
enum class Regime { FastKdv, FastOde };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

struct SystemParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double epsilon = 1.0;
    double L = 1.0;
    Regime regime = Regime::FastKdv;

    /// Factor multiplying the PDE rows of the semi-discrete system.
    double pde_scale() const { return regime == Regime::FastKdv ? 1.0 / epsilon : 1.0; }
    /// Factor multiplying the ODE row.
    double ode_scale() const { return regime == Regime::FastOde ? 1.0 / epsilon : 1.0; }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Default tolerance for the critical-length and singular-profile checks.
inline constexpr double kDefaultCriticalTol = 1e-9;

/// Returns p unchanged or throws DomainError (NonPositiveEpsilon, NonPositiveLength,
/// CriticalLength, SingularProfile).
SystemParams validate_params(const SystemParams& p, double tol = kDefaultCriticalTol);

/// Uniform mesh x_i = i·h, i = 0..n, h = L/n, n ≥ 8.
class Grid {
public:
    Grid(double L, int n);

    double length() const { return L_; }
    int intervals() const { return n_; }
    /// Number of interior unknowns, n - 1.
    int interior() const { return n_ - 1; }
    double spacing() const { return h_; }
    double node(int i) const { return i == n_ ? L_ : i * h_; }
    std::vector<double> nodes() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double L_;
    int n_;
    double h_;
};

/// PDE nodal values y[0..n] (with y[0] = y[n] = 0) and the scalar ODE state.
struct CoupledState {
    double t = 0.0;
    std::vector<double> y;
    double z = 0.0;

    static CoupledState zero(const Grid& grid, double t = 0.0);
    /// Samples y0 at the nodes and pins both Dirichlet traces to zero.
    static CoupledState sampled(const Grid& grid, const std::function<double(double)>& y0, double z0,
                                double t = 0.0);
};

/// Distributed forcing d1(t,x) and Neumann forcing d2(t). When d2 is set it replaces
/// a·z as the right Neumann datum (stand-alone disturbed KdV).
struct Disturbance {
    std::function<double(double, double)> d1;
    std::function<double(double)> d2;

    bool has_d1() const { return static_cast<bool>(d1); }
    bool has_d2() const { return static_cast<bool>(d2); }
    double eval_d1(double t, double x) const { return d1 ? d1(t, x) : 0.0; }
    double eval_d2(double t) const { return d2 ? d2(t) : 0.0; }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> z;
    std::vector<double> yx0;
    std::map<std::string, std::vector<double>> functionals;
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> snapshots;

    std::size_t size() const { return times.size(); }
    /// Snapshot index for sample k when snapshots are dense (one per sample).
    bool dense() const { return !times.empty() && snapshots.size() == times.size(); }
};

/// Trapezoidal L² inner product of two nodal vectors on the grid.
double l2_dot(std::span<const double> u, std::span<const double> v, double h);
inline double l2_norm_sq(std::span<const double> u, double h) { return l2_dot(u, u, h); }

}  // namespace kdvlab
