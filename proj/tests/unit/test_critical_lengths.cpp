#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "kdvlab/critical_lengths.hpp"

using namespace kdvlab;

namespace {

/// Distinct values of 2π·sqrt((k² + kl + l²)/3) ≤ L_max by plain double loops.
std::vector<double> brute_force(double L_max) {
    std::vector<double> all;
    for (int k = 1; k <= 40; ++k) {
        for (int l = 1; l <= 40; ++l) {
            const double v = 2.0 * std::numbers::pi * std::sqrt((k * k + k * l + l * l) / 3.0);
            if (v <= L_max) all.push_back(v);
        }
    }
    std::sort(all.begin(), all.end());
    std::vector<double> unique;
    for (double v : all) {
        if (unique.empty() || v - unique.back() > 1e-9 * v) unique.push_back(v);
    }
    return unique;
}

}  // namespace

TEST_CASE("critical value") {
    CHECK(critical_value(1, 1) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(critical_value(1, 2) == doctest::Approx(9.5977).epsilon(1e-4));
    CHECK(critical_value(2, 1) == critical_value(1, 2));
}

TEST_CASE("enumeration examples") {
    CHECK(critical_lengths_up_to(1.0).empty());

    const auto seven = critical_lengths_up_to(7.0);
    REQUIRE(seven.size() == 1);
    CHECK(seven[0].value == doctest::Approx(2.0 * std::numbers::pi));

    const auto ten = critical_lengths_up_to(10.0);
    REQUIRE(ten.size() == 2);
    CHECK(ten[1].value == doctest::Approx(2.0 * std::numbers::pi * std::sqrt(7.0 / 3.0)));
    CHECK(ten[1].k == 1);
    CHECK(ten[1].l == 2);
}

TEST_CASE("enumeration matches brute force") {
    for (double L_max : {5.0, 10.0, 30.0, 60.0}) {
        const auto got = critical_lengths_up_to(L_max);
        const auto want = brute_force(L_max);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].value == doctest::Approx(want[i]).epsilon(1e-12));
            CHECK(got[i].k <= got[i].l);
            CHECK(critical_value(got[i].k, got[i].l) == doctest::Approx(got[i].value));
        }
    }
}

TEST_CASE("coincident values keep the smallest pair") {
    // (1,9) and (5,6) both give k² + kl + l² = 91.
    const auto list = critical_lengths_up_to(2.0 * std::numbers::pi * std::sqrt(91.0 / 3.0) + 1e-9);
    CHECK(list.back().k == 1);
    CHECK(list.back().l == 9);
    for (const auto& c : critical_lengths_up_to(80.0)) {
        for (int k = 1; k <= c.k; ++k) {
            for (int l = k; l <= 60; ++l) {
                if (k == c.k && l >= c.l) break;
                CHECK_FALSE(std::abs(critical_value(k, l) - c.value) <= 1e-12 * c.value);
            }
        }
    }
}

TEST_CASE("membership") {
    const double two_pi = 2.0 * std::numbers::pi;
    const auto at = is_critical(two_pi, 1e-9);
    CHECK(at.critical);
    CHECK(at.distance == doctest::Approx(0.0));
    CHECK(at.nearest.k == 1);

    const auto three = is_critical(3.0, 1e-9);
    CHECK_FALSE(three.critical);
    CHECK(three.nearest.value == doctest::Approx(two_pi));
    CHECK(three.distance == doctest::Approx(two_pi - 3.0));

    CHECK(is_critical(two_pi + 0.5e-6, 1e-6).critical);
    CHECK_FALSE(is_critical(two_pi + 2e-6, 1e-6).critical);
}
