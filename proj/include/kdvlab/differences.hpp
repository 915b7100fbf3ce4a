#pragma once

#include <span>
#include <vector>

namespace kdvlab::fd {

// Second-order stencils. Interior: central differences. Boundaries: one-sided,
// five points for the third derivative (offsets -1..3 at the node next to the end,
// 0..4 at the end itself); odd derivatives flip sign under reflection.

/// y'''(x_1) from y_0..y_4.
inline constexpr double kD3NearLeft[5] = {-1.5, 5.0, -6.0, 3.0, -0.5};
/// y'''(x_0) from y_0..y_4.
inline constexpr double kD3AtLeft[5] = {-2.5, 9.0, -12.0, 7.0, -1.5};
/// Fourth-order y'(x_n) from y_{n-3}..y_{n+1}, used to eliminate the ghost node.
inline constexpr double kD1RightGhost[5] = {-1.0 / 12.0, 0.5, -1.5, 5.0 / 6.0, 0.25};

/// (-3 y_0 + 4 y_1 - y_2) / (2h)
double left_slope(std::span<const double> y, double h);
/// (3 y_n - 4 y_{n-1} + y_{n-2}) / (2h)
double right_slope(std::span<const double> y, double h);

/// Nodal derivative of the given order (1, 2 or 3) on all nodes 0..n.
std::vector<double> nodal_derivative(std::span<const double> y, double h, int order);

}  // namespace kdvlab::fd
