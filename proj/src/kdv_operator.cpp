#include "kdvlab/kdv_operator.hpp"

#include <stdexcept>

#include "kdvlab/differences.hpp"
#include "kdvlab/errors.hpp"

namespace kdvlab {

SpatialOperator::SpatialOperator(const Grid& grid, double a)
    : grid_(grid),
      a_(a),
      interior_(grid.interior(), 2, 3),
      neumann_unit_(static_cast<std::size_t>(grid.interior()), 0.0),
      trace_(static_cast<std::size_t>(grid.interior()), 0.0) {
    const int n = grid.intervals();
    if (n < 8) throw DomainError(ErrorCode::GridTooCoarse, "operator needs n >= 8");
    const double h = grid.spacing();
    const double h3 = h * h * h;

    // Adds coeff·y_j to row r, resolving boundary and ghost nodes.
    auto add_node = [&](int r, int j, double coeff) {
        if (j == 0 || j == n) return;
        if (j == n + 1) {
            // y'(L)·h = Σ w_k y_{n-3+k} (k = 0..4) with y_{n+1} the ghost.
            const double* w = fd::kD1RightGhost;
            neumann_unit_[r] += coeff * h / w[4];
            for (int k = 0; k < 4; ++k) {
                const int node = n - 3 + k;
                if (node != n) interior_.add(r, node - 1, -coeff * w[k] / w[4]);
            }
            return;
        }
        interior_.add(r, j - 1, coeff);
    };

    for (int i = 1; i < n; ++i) {
        const int r = i - 1;
        // -y_x
        add_node(r, i + 1, -1.0 / (2.0 * h));
        add_node(r, i - 1, 1.0 / (2.0 * h));
        // -y_xxx
        if (i == 1) {
            for (int k = 0; k < 5; ++k) add_node(r, k, -fd::kD3NearLeft[k] / h3);
        } else {
            add_node(r, i + 2, -1.0 / (2.0 * h3));
            add_node(r, i + 1, 2.0 / (2.0 * h3));
            add_node(r, i - 1, -2.0 / (2.0 * h3));
            add_node(r, i - 2, 1.0 / (2.0 * h3));
        }
    }
    trace_[0] = 4.0 / (2.0 * h);
    trace_[1] = -1.0 / (2.0 * h);
}

std::vector<double> SpatialOperator::neumann_coupling() const {
    std::vector<double> out(neumann_unit_);
    for (auto& v : out) v *= a_;
    return out;
}

void SpatialOperator::apply(std::span<const double> y, double neumann_datum, std::span<double> out) const {
    const int n = grid_.intervals();
    if (static_cast<int>(y.size()) != n + 1 || out.size() != y.size()) {
        throw std::invalid_argument("SpatialOperator::apply: expected n+1 nodal values");
    }
    interior_.multiply(y.subspan(1, n - 1), out.subspan(1, n - 1));
    for (int r = 0; r < n - 1; ++r) out[r + 1] += neumann_unit_[r] * neumann_datum;
    out[0] = 0.0;
    out[n] = 0.0;
}

std::vector<double> SpatialOperator::apply(std::span<const double> y, double neumann_datum) const {
    std::vector<double> out(y.size(), 0.0);
    apply(y, neumann_datum, out);
    return out;
}

double SpatialOperator::trace(std::span<const double> y) const {
    return trace_[0] * y[1] + trace_[1] * y[2];
}

SpatialOperator build_operator(const Grid& grid, double a) { return SpatialOperator(grid, a); }

double trace_yx0(const CoupledState& state, const Grid& grid) {
    const double h = grid.spacing();
    return (4.0 * state.y[1] - state.y[2]) / (2.0 * h);
}

SemiDiscreteRhs semidiscrete_rhs(const CoupledState& state, const SystemParams& params,
                                 const SpatialOperator& op, const Disturbance& disturbance, double t) {
    const Grid& grid = op.grid();
    const double g = disturbance.has_d2() ? disturbance.eval_d2(t) : params.a * state.z;
    SemiDiscreteRhs rhs;
    rhs.dy = op.apply(state.y, g);
    const double sy = params.pde_scale();
    for (int i = 1; i < grid.intervals(); ++i) {
        rhs.dy[i] = sy * (rhs.dy[i] + disturbance.eval_d1(t, grid.node(i)));
    }
    rhs.dz = params.ode_scale() * (params.b * state.z + params.c * op.trace(state.y));
    return rhs;
}

}  // namespace kdvlab
