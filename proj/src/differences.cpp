#include "kdvlab/differences.hpp"

#include <stdexcept>

namespace kdvlab::fd {

double left_slope(std::span<const double> y, double h) {
    return (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
}

double right_slope(std::span<const double> y, double h) {
    const std::size_t n = y.size() - 1;
    return (3.0 * y[n] - 4.0 * y[n - 1] + y[n - 2]) / (2.0 * h);
}

std::vector<double> nodal_derivative(std::span<const double> y, double h, int order) {
    if (y.size() < 6) throw std::invalid_argument("nodal_derivative: need at least 6 nodes");
    const std::size_t n = y.size() - 1;
    std::vector<double> d(y.size(), 0.0);
    switch (order) {
        case 1:
            for (std::size_t i = 1; i < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
            d[0] = left_slope(y, h);
            d[n] = right_slope(y, h);
            break;
        case 2: {
            const double h2 = h * h;
            for (std::size_t i = 1; i < n; ++i) d[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h2;
            d[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2;
            d[n] = (2.0 * y[n] - 5.0 * y[n - 1] + 4.0 * y[n - 2] - y[n - 3]) / h2;
            break;
        }
        case 3: {
            const double h3 = h * h * h;
            for (std::size_t i = 2; i + 2 <= n; ++i) {
                d[i] = (y[i + 2] - 2.0 * y[i + 1] + 2.0 * y[i - 1] - y[i - 2]) / (2.0 * h3);
            }
            double l0 = 0.0, l1 = 0.0, r0 = 0.0, r1 = 0.0;
            for (std::size_t j = 0; j < 5; ++j) {
                l0 += kD3AtLeft[j] * y[j];
                l1 += kD3NearLeft[j] * y[j];
                r0 += kD3AtLeft[j] * y[n - j];
                r1 += kD3NearLeft[j] * y[n - j];
            }
            d[0] = l0 / h3;
            d[1] = l1 / h3;
            d[n] = -r0 / h3;
            d[n - 1] = -r1 / h3;
            break;
        }
        default:
            throw std::invalid_argument("nodal_derivative: order must be 1, 2 or 3");
    }
    return d;
}

}  // namespace kdvlab::fd
