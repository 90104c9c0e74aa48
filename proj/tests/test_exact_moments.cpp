#include <doctest.h>

#include <cmath>
#include <vector>

#include "synclab/exact_moments.hpp"
#include "synclab/hermitian.hpp"

using namespace synclab;

TEST_CASE("single-frequency trig moments") {
    for (int ell = 1; ell <= 4; ++ell) {
        std::vector<int> alphas(static_cast<std::size_t>(ell), 0), betas(static_cast<std::size_t>(ell), 0);
        alphas.back() = 2;
        CHECK(trig_moment_exact(alphas, betas) == Rational(1, 2));
    }
    CHECK(trig_moment_exact({1}, {1}) == Rational(0));
    CHECK(trig_moment_exact({2}, {2}) == Rational(1, 8));
    CHECK(trig_moment_exact({0}, {4}) == Rational(3, 8));
    CHECK(trig_moment_exact({1}, {0}) == Rational(0));
}

TEST_CASE("cross-frequency orthogonality") {
    // E[sin(theta) cos(2 theta)] = 0
    CHECK(trig_moment_exact({1, 0}, {0, 1}) == Rational(0));
    // E[cos(theta)^2 cos(2 theta)] = 1/4 (cos 2t = 2cos^2 t - 1)
    CHECK(trig_moment_exact({0, 0}, {2, 1}) == Rational(1, 4));
}

TEST_CASE("gaussian comparison moments") {
    CHECK(gaussian_moment_exact({2}, {0}) == Rational(1, 2));
    CHECK(gaussian_moment_exact({2}, {2}) == Rational(1, 4));
    CHECK(gaussian_moment_exact({3}, {0}) == Rational(0));
    CHECK(gaussian_moment_exact({4}, {0}) == Rational(3, 4));
    CHECK(gaussian_moment_exact({0, 2}, {2, 0}) == Rational(1, 4));
}

TEST_CASE("moment gap vanishes for total degree <= 2, exhaustively over L <= 4") {
    for (int L = 1; L <= 4; ++L) {
        const int slots = 2 * L;
        // all exponent patterns with total degree <= 2
        std::vector<int> alphas(static_cast<std::size_t>(L), 0), betas(static_cast<std::size_t>(L), 0);
        CHECK(moment_gap(alphas, betas) == Rational(0));  // degree 0
        for (int i = 0; i < slots; ++i) {
            for (int j = i; j < slots; ++j) {
                std::fill(alphas.begin(), alphas.end(), 0);
                std::fill(betas.begin(), betas.end(), 0);
                auto bump = [&](int slot) {
                    if (slot < L)
                        ++alphas[static_cast<std::size_t>(slot)];
                    else
                        ++betas[static_cast<std::size_t>(slot - L)];
                };
                bump(i);
                CAPTURE(L);
                CAPTURE(i);
                CHECK(moment_gap(alphas, betas) == Rational(0));  // degree 1
                bump(j);
                CAPTURE(j);
                CHECK(moment_gap(alphas, betas) == Rational(0));  // degree 2
            }
        }
    }
}

TEST_CASE("moment gap for the degree-4 sin^2 cos^2 pattern is -1/8") {
    CHECK(moment_gap({2}, {2}) == Rational(1, 8) - Rational(1, 4));
    CHECK(moment_gap({2}, {2}) == -Rational(1, 8));
}

TEST_CASE("trig moments agree with numeric quadrature on a higher pattern") {
    const std::vector<int> alphas = {2, 1, 0}, betas = {0, 1, 2};
    const double exact = static_cast<double>(trig_moment_exact(alphas, betas));
    const int nodes = 1024;
    double sum = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double t = kTwoPi * j / nodes;
        double prod = 1.0;
        for (int l = 1; l <= 3; ++l) {
            for (int a = 0; a < alphas[static_cast<std::size_t>(l - 1)]; ++a) prod *= std::sin(l * t);
            for (int b = 0; b < betas[static_cast<std::size_t>(l - 1)]; ++b) prod *= std::cos(l * t);
        }
        sum += prod;
    }
    CHECK(exact == doctest::Approx(sum / nodes).epsilon(1e-12));
}

TEST_CASE("expansion budgets are enforced") {
    CHECK_THROWS_AS(trig_moment_exact(std::vector<int>(9, 0), std::vector<int>(9, 0)),
                    budget_exceeded);
    CHECK_THROWS_AS(trig_moment_exact({25}, {0}), budget_exceeded);
    CHECK_THROWS_AS(gaussian_moment_exact({13}, {12}), budget_exceeded);
    CHECK_THROWS_AS(trig_moment_exact({1, 0}, {0}), invalid_parameter);
    CHECK_THROWS_AS(trig_moment_exact({-1}, {0}), invalid_parameter);
}
