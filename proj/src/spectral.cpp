#include "kdvlab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kdvlab/errors.hpp"
#include "kdvlab/kdv_operator.hpp"
#include "kdvlab/profiles.hpp"

namespace kdvlab {

namespace {

void fill_block(Eigen::MatrixXd& out, const SpatialOperator& op, double scale) {
    const BandMatrix& K = op.interior_matrix();
    const int m = K.size();
    for (int i = 0; i < m; ++i) {
        for (int j = std::max(0, i - K.lower()); j <= std::min(m - 1, i + K.upper()); ++j) {
            out(i, j) = scale * K(i, j);
        }
    }
}

}  // namespace

GeneratorMatrix assemble_generator(const SystemParams& params, const Grid& grid, bool allow_critical) {
    if (!allow_critical) {
        validate_params(params);
    } else {
        if (!(params.epsilon > 0.0)) throw DomainError(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
        if (!(params.L > 0.0)) throw DomainError(ErrorCode::NonPositiveLength, "L must be positive");
    }
    if (grid.length() != params.L) throw std::invalid_argument("grid length differs from params.L");
    const SpatialOperator op(grid, params.a);
    const int m = grid.interior();
    const double sy = params.pde_scale();
    const double sz = params.ode_scale();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m + 1, m + 1);
    fill_block(G, op, sy);
    const auto unit = op.neumann_unit();
    const auto tr = op.trace_stencil();
    for (int i = 0; i < m; ++i) {
        G(i, m) = sy * params.a * unit[i];
        G(m, i) = sz * params.c * tr[i];
    }
    G(m, m) = sz * params.b;
    return {std::move(G), params, grid};
}

Eigen::MatrixXd kdv_block(const Grid& grid) {
    const SpatialOperator op(grid, 0.0);
    const int m = grid.interior();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
    fill_block(K, op, 1.0);
    return K;
}

std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& matrix, int cap) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("spectrum: matrix must be square");
    if (matrix.rows() > cap) {
        throw DomainError(ErrorCode::DimensionCap, "dimension " + std::to_string(matrix.rows()) + " exceeds cap " +
                                                       std::to_string(cap));
    }
    if (matrix.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
    if (solver.info() != Eigen::Success) throw DomainError(ErrorCode::EigenFailure, "nonsymmetric eigensolve failed");
    const Eigen::VectorXcd ev = solver.eigenvalues();
    std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
    for (const auto& z : out) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw DomainError(ErrorCode::EigenFailure, "non-finite eigenvalue");
        }
    }
    return out;
}

double spectral_abscissa(const Eigen::MatrixXd& matrix, int cap) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : spectrum(matrix, cap)) best = std::max(best, z.real());
    return best;
}

double state_dot(const GeneratorMatrix& G, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const int m = G.dimension() - 1;
    return G.grid.spacing() * x.head(m).dot(u.head(m)) + x(m) * u(m);
}

double form_slack(const GeneratorMatrix& G, const Eigen::VectorXd& x, double C) {
    const Eigen::VectorXd gx = G.matrix * x;
    return 2.0 * state_dot(G, gx, x) - C * state_dot(G, x, x);
}

Eigen::VectorXd random_domain_state(const GeneratorMatrix& G, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Grid& grid = G.grid;
    const double L = grid.length();
    const int m = grid.interior();
    constexpr int kModes = 6;
    double coef[kModes];
    for (int k = 0; k < kModes; ++k) coef[k] = normal(rng) / (k + 1);
    const double z = normal(rng);
    const bool regular = std::abs(std::sin(L / 2.0)) >= kSingularProfileTol;

    Eigen::VectorXd x(m + 1);
    for (int i = 1; i <= m; ++i) {
        const double xi = grid.node(i);
        double y = 0.0;
        for (int k = 0; k < kModes; ++k) {
            y += coef[k] * std::sin((k + 1) * std::numbers::pi * xi / L) * std::sin(std::numbers::pi * xi / L);
        }
        if (regular) y -= eval_f(xi, G.params.a, L) * z;
        x(i - 1) = y;
    }
    x(m) = z;
    return x / std::sqrt(state_dot(G, x, x));
}

double quadratic_form_bound(const GeneratorMatrix& G, int trials, double C, std::uint64_t seed) {
    Eigen::VectorXd ez = Eigen::VectorXd::Zero(G.dimension());
    ez(G.dimension() - 1) = 1.0;
    double worst = form_slack(G, ez, C);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(trials, 0)));
    std::mt19937_64 master(seed);
    for (auto& s : seeds) s = master();
    for (const auto s : seeds) worst = std::max(worst, form_slack(G, random_domain_state(G, s), C));
    return worst;
}

double dissipativity_constant(double a, double b, double c) {
    return std::max(0.0, 2.0 * a * a + 2.0 * b + 8.0 * c * c);
}

}  // namespace kdvlab
