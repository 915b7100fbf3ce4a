#pragma once

#include <span>
#include <vector>

#include "kdvlab/banded.hpp"
#include "kdvlab/core.hpp"

namespace kdvlab {

/// Discrete -(∂x + ∂x³) on the interior unknowns y[1..n-1] with
///   y_0 = y_n = 0 eliminated,
///   y_x(L) = g imposed through a ghost node y_{n+1} from a fourth-order one-sided
///   derivative relation, so g enters only the last row,
///   a five-point one-sided third-derivative closure at i = 1 (no condition on y_x(0)).
/// Interior stencils: (y_{i+1} - y_{i-1})/(2h) and
/// (y_{i+2} - 2y_{i+1} + 2y_{i-1} - y_{i-2})/(2h³).
class SpatialOperator {
public:
    SpatialOperator(const Grid& grid, double a);

    const Grid& grid() const { return grid_; }
    double gain() const { return a_; }

    /// Banded matrix on y[1..n-1]; bandwidths kl = 2, ku = 3.
    const BandMatrix& interior_matrix() const { return interior_; }
    /// Row contributions per unit right Neumann datum g.
    std::span<const double> neumann_unit() const { return neumann_unit_; }
    /// Row contributions of the datum a·z per unit z.
    std::vector<double> neumann_coupling() const;
    /// Coefficients extracting y_x(0) from y[1..n-1].
    std::span<const double> trace_stencil() const { return trace_; }

    /// out[1..n-1] = -(y_x + y_xxx) with right Neumann datum g; out[0] = out[n] = 0.
    void apply(std::span<const double> y, double neumann_datum, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> y, double neumann_datum) const;

    /// (4 y_1 - y_2) / (2h), using y_0 = 0.
    double trace(std::span<const double> y) const;

private:
    Grid grid_;
    double a_;
    BandMatrix interior_;
    std::vector<double> neumann_unit_;
    std::vector<double> trace_;
};

SpatialOperator build_operator(const Grid& grid, double a);

/// Second-order one-sided y_x(t,0) of the state.
double trace_yx0(const CoupledState& state, const Grid& grid);

struct SemiDiscreteRhs {
    std::vector<double> dy;  ///< length n+1, zero at both ends
    double dz = 0.0;
};

/// Right-hand side of the semi-discrete system. The Neumann datum is d2(t) when the
/// disturbance carries one, a·z otherwise.
SemiDiscreteRhs semidiscrete_rhs(const CoupledState& state, const SystemParams& params,
                                 const SpatialOperator& op, const Disturbance& disturbance, double t);

}  // namespace kdvlab
