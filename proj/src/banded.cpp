#include "kdvlab/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kdvlab/errors.hpp"

namespace kdvlab {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(2 * kl + ku + 1) * static_cast<std::size_t>(n), 0.0) {
    if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandMatrix: bad dimensions");
}

double BandMatrix::operator()(int i, int j) const { return in_band(i, j) ? ab_[index(i, j)] : 0.0; }

void BandMatrix::set(int i, int j, double value) {
    if (!in_band(i, j)) throw std::out_of_range("BandMatrix::set outside band");
    ab_[index(i, j)] = value;
}

void BandMatrix::add(int i, int j, double value) {
    if (!in_band(i, j)) throw std::out_of_range("BandMatrix::add outside band");
    ab_[index(i, j)] += value;
}

void BandMatrix::multiply(std::span<const double> x, std::span<double> out) const {
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - kl_);
        const int j1 = std::min(n_ - 1, i + ku_);
        double sum = 0.0;
        for (int j = j0; j <= j1; ++j) sum += ab_[index(i, j)] * x[j];
        out[i] = sum;
    }
}

BandMatrix BandMatrix::shifted(double alpha, double beta) const {
    BandMatrix out(n_, kl_, ku_);
    for (int j = 0; j < n_; ++j) {
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) {
            out.ab_[out.index(i, j)] = beta * ab_[index(i, j)] + (i == j ? alpha : 0.0);
        }
    }
    return out;
}

BandLU::BandLU(BandMatrix A) : factors_(std::move(A)), pivots_(static_cast<std::size_t>(factors_.size())) {
    const int n = factors_.size();
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, factors_.lower(), factors_.upper(),
                                           factors_.data(), factors_.leading_dimension(), pivots_.data());
    if (info != 0) {
        throw DomainError(ErrorCode::SolveFailure, "band LU failed (dgbtrf info = " + std::to_string(info) + ")");
    }
}

void BandLU::solve(std::span<double> b) const {
    const int n = factors_.size();
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, factors_.lower(), factors_.upper(), 1,
                                           factors_.data(), factors_.leading_dimension(), pivots_.data(),
                                           b.data(), n);
    if (info != 0) {
        throw DomainError(ErrorCode::SolveFailure, "band solve failed (dgbtrs info = " + std::to_string(info) + ")");
    }
}

BorderedSolver::BorderedSolver(BandMatrix A, std::vector<double> u, std::vector<double> v, double d)
    : lu_(std::move(A)), u_(std::move(u)), v_(std::move(v)), schur_(d) {
    if (u_.empty()) return;
    if (static_cast<int>(u_.size()) != lu_.size() || v_.size() != u_.size()) {
        throw std::invalid_argument("BorderedSolver: border size mismatch");
    }
    Ainv_u_ = u_;
    lu_.solve(Ainv_u_);
    schur_ = d - std::inner_product(v_.begin(), v_.end(), Ainv_u_.begin(), 0.0);
    const double scale = std::abs(d) + std::sqrt(std::inner_product(v_.begin(), v_.end(), v_.begin(), 0.0)) *
                                           std::sqrt(std::inner_product(Ainv_u_.begin(), Ainv_u_.end(),
                                                                        Ainv_u_.begin(), 0.0));
    if (!(std::abs(schur_) > 1e-14 * std::max(scale, 1e-300))) {
        throw DomainError(ErrorCode::SolveFailure, "singular Schur complement in bordered solve");
    }
}

void BorderedSolver::solve(std::span<double> r, double& rho) const {
    lu_.solve(r);
    if (u_.empty()) return;
    const double xi = (rho - std::inner_product(v_.begin(), v_.end(), r.begin(), 0.0)) / schur_;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= Ainv_u_[i] * xi;
    rho = xi;
}

}  // namespace kdvlab
