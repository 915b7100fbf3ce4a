#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "kdvlab/banded.hpp"

using namespace kdvlab;

namespace {

BandMatrix random_band(int n, int kl, int ku, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandMatrix A(n, kl, ku);
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) A.set(i, j, u(rng));
    }
    return A;
}

Eigen::MatrixXd dense(const BandMatrix& A) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.size(), A.size());
    for (int i = 0; i < A.size(); ++i) {
        for (int j = 0; j < A.size(); ++j) {
            if (A.in_band(i, j)) D(i, j) = A(i, j);
        }
    }
    return D;
}

}  // namespace

TEST_CASE("storage and product") {
    std::mt19937_64 rng(3);
    const BandMatrix A = random_band(12, 2, 3, rng);
    CHECK(A(0, 5) == 0.0);
    CHECK(A(7, 2) == 0.0);
    Eigen::VectorXd x = Eigen::VectorXd::Random(12);
    std::vector<double> out(12);
    A.multiply(std::span<const double>(x.data(), 12), out);
    const Eigen::VectorXd want = dense(A) * x;
    for (int i = 0; i < 12; ++i) CHECK(out[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("shifted") {
    std::mt19937_64 rng(4);
    const BandMatrix A = random_band(10, 2, 3, rng);
    const BandMatrix S = A.shifted(1.0, -0.5);
    const Eigen::MatrixXd want = Eigen::MatrixXd::Identity(10, 10) - 0.5 * dense(A);
    CHECK((dense(S) - want).norm() < 1e-14);
}

TEST_CASE("band solve against dense LU") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        BandMatrix A = random_band(40, 2, 3, rng);
        for (int i = 0; i < 40; ++i) A.add(i, i, 4.0);
        const Eigen::MatrixXd D = dense(A);
        Eigen::VectorXd b = Eigen::VectorXd::Random(40);
        const Eigen::VectorXd want = D.partialPivLu().solve(b);
        BandLU(A).solve(std::span<double>(b.data(), 40));
        CHECK((b - want).norm() < 1e-12 * want.norm());
    }
}

TEST_CASE("bordered solve against dense LU") {
    std::mt19937_64 rng(6);
    const int n = 30;
    BandMatrix A = random_band(n, 2, 3, rng);
    for (int i = 0; i < n; ++i) A.add(i, i, 3.0);
    Eigen::VectorXd u = Eigen::VectorXd::Random(n), v = Eigen::VectorXd::Random(n);
    const double d = 2.5;
    Eigen::MatrixXd full(n + 1, n + 1);
    full.topLeftCorner(n, n) = dense(A);
    full.topRightCorner(n, 1) = u;
    full.bottomLeftCorner(1, n) = v.transpose();
    full(n, n) = d;
    Eigen::VectorXd rhs = Eigen::VectorXd::Random(n + 1);
    const Eigen::VectorXd want = full.partialPivLu().solve(rhs);

    const BorderedSolver solver(A, {u.data(), u.data() + n}, {v.data(), v.data() + n}, d);
    CHECK(solver.bordered());
    double rho = rhs[n];
    solver.solve(std::span<double>(rhs.data(), n), rho);
    rhs[n] = rho;
    CHECK((rhs - want).norm() < 1e-12 * want.norm());
}

TEST_CASE("empty border reduces to the band solve") {
    BandMatrix A(9, 2, 3);
    for (int i = 0; i < 9; ++i) A.set(i, i, 2.0);
    const BorderedSolver solver(A, {}, {}, 1.0);
    CHECK_FALSE(solver.bordered());
    std::vector<double> r(9, 4.0);
    double rho = 7.0;
    solver.solve(r, rho);
    CHECK(r[3] == 2.0);
    CHECK(rho == 7.0);
}

TEST_CASE("singular matrix is reported") {
    BandMatrix A(9, 2, 3);
    CHECK_THROWS(BandLU(A));
}
