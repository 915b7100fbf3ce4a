#pragma once

#include <span>
#include <vector>

namespace kdvlab {

/// Square band matrix in LAPACK general-band layout (with kl extra rows for the
/// fill-in produced by partial pivoting).
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
    double operator()(int i, int j) const;
    void set(int i, int j, double value);
    void add(int i, int j, double value);

    /// out = A·x
    void multiply(std::span<const double> x, std::span<double> out) const;

    /// I·alpha + A·beta, same bandwidths.
    BandMatrix shifted(double alpha, double beta) const;

    double* data() { return ab_.data(); }
    const double* data() const { return ab_.data(); }
    int leading_dimension() const { return ldab_; }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_;
    }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int ldab_ = 1;
    std::vector<double> ab_;
};

/// LU factorization with partial pivoting (LAPACK dgbtrf/dgbtrs).
class BandLU {
public:
    BandLU() = default;
    explicit BandLU(BandMatrix A);

    /// Solves A·x = b in place.
    void solve(std::span<double> b) const;
    int size() const { return factors_.size(); }

private:
    BandMatrix factors_;
    std::vector<int> pivots_;
};

/// Solver for the bordered system
///     [ A   u ] [x ]   [r ]
///     [ vᵀ  d ] [ξ ] = [ρ]
/// with A banded, via A⁻¹u and the scalar Schur complement d − vᵀA⁻¹u.
/// An empty border (u, v empty) reduces to the band solve.
class BorderedSolver {
public:
    BorderedSolver() = default;
    BorderedSolver(BandMatrix A, std::vector<double> u, std::vector<double> v, double d);

    bool bordered() const { return !u_.empty(); }
    /// Overwrites r with x and rho with ξ.
    void solve(std::span<double> r, double& rho) const;

private:
    BandLU lu_;
    std::vector<double> u_;
    std::vector<double> v_;
    std::vector<double> Ainv_u_;
    double schur_ = 1.0;
};

}  // namespace kdvlab
