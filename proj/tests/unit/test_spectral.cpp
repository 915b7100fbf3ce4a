#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kdvlab/errors.hpp"
#include "kdvlab/experiments.hpp"
#include "kdvlab/integrator.hpp"
#include "kdvlab/kdv_operator.hpp"
#include "kdvlab/lyapunov.hpp"
#include "kdvlab/profiles.hpp"
#include "kdvlab/spectral.hpp"

using namespace kdvlab;

namespace {

constexpr double kL = 3.0;

}  // namespace

TEST_CASE("generator acts like the semi-discrete right-hand side") {
    const Grid g(kL, 40);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal;
    for (Regime regime : {Regime::FastKdv, Regime::FastOde}) {
        const SystemParams p{0.4, -0.7, 0.9, 0.2, kL, regime};
        const GeneratorMatrix G = assemble_generator(p, g);
        const SpatialOperator op(g, p.a);
        CHECK(G.dimension() == g.interior() + 1);
        for (int trial = 0; trial < 100; ++trial) {
            CoupledState s = CoupledState::zero(g);
            Eigen::VectorXd x(G.dimension());
            for (int i = 1; i < g.intervals(); ++i) x[i - 1] = s.y[i] = normal(rng);
            x[G.dimension() - 1] = s.z = normal(rng);
            const Eigen::VectorXd Gx = G.matrix * x;
            const SemiDiscreteRhs r = semidiscrete_rhs(s, p, op, {}, 0.0);
            const double scale = Gx.cwiseAbs().maxCoeff();
            for (int i = 1; i < g.intervals(); ++i) CHECK(std::abs(Gx[i - 1] - r.dy[i]) <= 1e-13 * scale);
            CHECK(std::abs(Gx[G.dimension() - 1] - r.dz) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("decoupled generator") {
    const Grid g(kL, 40);
    const SystemParams p{0.0, -1.0, 0.0, 0.5, kL, Regime::FastOde};
    const GeneratorMatrix G = assemble_generator(p, g);
    const int m = G.dimension();
    CHECK(G.matrix.col(m - 1).head(m - 1).isZero());
    CHECK(G.matrix.row(m - 1).head(m - 1).isZero());
    CHECK(G.matrix(m - 1, m - 1) == -2.0);
    const double block = spectral_abscissa(kdv_block(g));
    CHECK(spectral_abscissa(G) == doctest::Approx(std::max(block, -2.0)));

    SystemParams slow = p;
    slow.b = -0.01;
    CHECK(spectral_abscissa(assemble_generator(slow, g)) == doctest::Approx(-0.02));
}

TEST_CASE("fast KdV scaling") {
    const Grid g(kL, 30);
    const SystemParams p{0.3, -1.0, 0.5, 0.2, kL, Regime::FastKdv};
    SystemParams half = p;
    half.epsilon = 0.1;
    const Eigen::MatrixXd A = assemble_generator(p, g).matrix;
    const Eigen::MatrixXd B = assemble_generator(half, g).matrix;
    const int m = A.rows();
    CHECK((B.topRows(m - 1) - 2.0 * A.topRows(m - 1)).norm() <= 1e-12 * A.norm());
    CHECK((B.row(m - 1) - A.row(m - 1)).norm() == 0.0);
}

TEST_CASE("critical lengths are rejected unless allowed") {
    const Grid g(2.0 * std::numbers::pi, 40);
    const SystemParams p{0.0, -1.0, 0.0, 1.0, 2.0 * std::numbers::pi, Regime::FastKdv};
    CHECK_THROWS_AS(assemble_generator(p, g), DomainError);
    CHECK_NOTHROW(assemble_generator(p, g, true));
}

TEST_CASE("abscissa") {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(0, 0) = -1.0;
    D(1, 1) = -2.0;
    CHECK(spectral_abscissa(D) == -1.0);
    CHECK(spectrum(D).size() == 2);
    try {
        spectral_abscissa(Eigen::MatrixXd::Identity(601, 601));
        FAIL("cap not enforced");
    } catch (const DomainError& e) {
        CHECK(e.code() == ErrorCode::DimensionCap);
    }
    CHECK(spectral_abscissa(Eigen::MatrixXd::Identity(601, 601), 700) == 1.0);
}

TEST_CASE("critical length degeneracy") {
    std::vector<double> crit;
    for (int n : {50, 100, 200}) crit.push_back(std::abs(spectral_abscissa(kdv_block(Grid(2.0 * std::numbers::pi, n)))));
    CHECK(crit[1] < crit[0]);
    CHECK(crit[2] < crit[1]);
    CHECK(crit[2] < 1e-2);

    // 1 - cos x is the continuous null mode; its samples are nearly annihilated.
    const Grid g(2.0 * std::numbers::pi, 200);
    const CoupledState s = CoupledState::sampled(g, [](double x) { return 1.0 - std::cos(x); }, 0.0);
    const auto out = SpatialOperator(g, 0.0).apply(s.y, 0.0);
    double worst = 0.0;
    for (double v : out) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-2);

    const double r1 = spectral_abscissa(kdv_block(Grid(kL, 100)));
    const double r2 = spectral_abscissa(kdv_block(Grid(kL, 200)));
    CHECK(r1 < 0.0);
    CHECK(std::abs(r2 - r1) / std::abs(r1) < 0.1);
}

TEST_CASE("regime-1 abscissa stays negative as epsilon shrinks") {
    const Grid g(kL, 100);
    for (double eps : {0.2, 0.1, 0.05}) {
        CHECK(spectral_abscissa(assemble_generator({0.1, -1.0, 1.0, eps, kL, Regime::FastKdv}, g)) < 0.0);
    }
}

TEST_CASE("abscissa sign agrees with simulated decay") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Grid g(kL, 50);
    int agree = 0;
    for (int draw = 0; draw < 10; ++draw) {
        const SystemParams p{u(rng), u(rng), u(rng), 0.5, kL, Regime::FastKdv};
        const double abscissa = spectral_abscissa(assemble_generator(p, g));
        const auto shape = bump_shape(1, kL);
        const CoupledState ic = CoupledState::sampled(g, [&](double x) { return shape(x) - eval_f(x, p.a, kL); }, 1.0);
        const Trajectory traj = simulate(p, g, ic, 20.0, 0.02, {}, {make_observer("energy", p, g)});
        const DecayFit fit = fit_decay(traj.times, traj.functionals.at("energy"), 0.5);
        agree += (abscissa < 0.0) == (fit.mu_hat > 0.0) ? 1 : 0;
    }
    CHECK(agree == 10);
}

TEST_CASE("domain states") {
    const Grid g(kL, 100);
    const SystemParams p{0.6, -1.0, 0.4, 1.0, kL, Regime::FastKdv};
    const GeneratorMatrix G = assemble_generator(p, g);
    const Eigen::VectorXd x = random_domain_state(G, 7);
    CHECK(state_dot(G, x, x) == doctest::Approx(1.0));
    CHECK(random_domain_state(G, 7) == x);
    CHECK_FALSE(random_domain_state(G, 8) == x);
    CHECK(form_slack(G, x, 2.0) == doctest::Approx(2.0 * state_dot(G, G.matrix * x, x) - 2.0));
}

TEST_CASE("quadratic form bound") {
    CHECK(dissipativity_constant(0.5, -2.0, 0.1) == 0.0);
    CHECK(dissipativity_constant(0.5, 0.0, 0.5) == doctest::Approx(2.5));

    SUBCASE("decoupled, C = 0") {
        std::vector<double> slack;
        for (int n : {100, 200, 400}) {
            const Grid g(kL, n);
            const GeneratorMatrix G = assemble_generator({0.0, -1.0, 0.0, 1.0, kL, Regime::FastKdv}, g);
            slack.push_back(quadratic_form_bound(G, 200, 0.0, 3));
            CHECK(slack.back() <= g.spacing());
        }
        CHECK(slack[1] < slack[0]);
        CHECK(slack[2] < slack[1]);
    }
    SUBCASE("coupled, derived constant") {
        const Grid g(kL, 100);
        const SystemParams p{0.8, 0.2, -0.7, 1.0, kL, Regime::FastKdv};
        const GeneratorMatrix G = assemble_generator(p, g);
        CHECK(quadratic_form_bound(G, 500, dissipativity_constant(p.a, p.b, p.c), 5) <= g.spacing());
    }
    SUBCASE("constant below the bound is caught on the z direction") {
        const Grid g(kL, 100);
        const GeneratorMatrix G = assemble_generator({0.0, -1.0, 0.0, 1.0, kL, Regime::FastKdv}, g);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(G.dimension());
        z[G.dimension() - 1] = 1.0;
        CHECK(form_slack(G, z, -5.0) == doctest::Approx(3.0));
        CHECK(quadratic_form_bound(G, 10, -5.0, 1) >= 3.0);
    }
}
