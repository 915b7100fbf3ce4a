#include "kdvlab/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kdvlab/critical_lengths.hpp"
#include "kdvlab/errors.hpp"

namespace kdvlab {

std::string_view to_string(Regime regime) {
    return regime == Regime::FastKdv ? "fast_kdv" : "fast_ode";
}

Regime parse_regime(std::string_view text) {
    if (text == "1" || text == "fast_kdv" || text == "FAST_KDV") return Regime::FastKdv;
    if (text == "2" || text == "fast_ode" || text == "FAST_ODE") return Regime::FastOde;
    throw DomainError(ErrorCode::InvalidConfig,
                      "regime must be one of 1, 2, fast_kdv, fast_ode (got '" + std::string(text) + "')");
}

SystemParams validate_params(const SystemParams& p, double tol) {
    if (!(p.epsilon > 0.0)) {
        throw DomainError(ErrorCode::NonPositiveEpsilon, "epsilon must be > 0");
    }
    if (!(p.L > 0.0)) {
        throw DomainError(ErrorCode::NonPositiveLength, "L must be > 0");
    }
    const auto check = is_critical(p.L, tol);
    if (check.critical) {
        throw DomainError::critical(check.nearest, p.L);
    }
    // With k,l >= 1 every multiple of 2π is critical, so this only fires for tolerances
    // where |sin(L/2)| is small but L is still outside the critical band.
    if (std::abs(std::sin(p.L / 2.0)) <= tol) {
        std::ostringstream os;
        os << "sin(L/2) vanishes for L = " << p.L;
        throw DomainError(ErrorCode::SingularProfile, os.str());
    }
    return p;
}

Grid::Grid(double L, int n) : L_(L), n_(n), h_(L / n) {
    if (!(L > 0.0)) {
        throw DomainError(ErrorCode::NonPositiveLength, "grid length must be > 0");
    }
    if (n < 8) {
        throw DomainError(ErrorCode::GridTooCoarse, "grid needs n >= 8 intervals (got " + std::to_string(n) + ")");
    }
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n_) + 1);
    for (int i = 0; i <= n_; ++i) x[i] = node(i);
    return x;
}

CoupledState CoupledState::zero(const Grid& grid, double t) {
    CoupledState s;
    s.t = t;
    s.y.assign(static_cast<std::size_t>(grid.intervals()) + 1, 0.0);
    return s;
}

CoupledState CoupledState::sampled(const Grid& grid, const std::function<double(double)>& y0, double z0,
                                   double t) {
    CoupledState s = zero(grid, t);
    for (int i = 1; i < grid.intervals(); ++i) s.y[i] = y0(grid.node(i));
    s.z = z0;
    return s;
}

double l2_dot(std::span<const double> u, std::span<const double> v, double h) {
    if (u.size() != v.size() || u.empty()) {
        throw std::invalid_argument("l2_dot: size mismatch");
    }
    double sum = 0.5 * (u.front() * v.front() + u.back() * v.back());
    for (std::size_t i = 1; i + 1 < u.size(); ++i) sum += u[i] * v[i];
    return h * sum;
}

}  // namespace kdvlab
