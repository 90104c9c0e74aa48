#include <doctest.h>

#include <cmath>
#include <vector>

#include "synclab/rng.hpp"

using namespace synclab;

TEST_CASE("streams are reproducible and counter-based") {
    rng::Stream a(42, rng::Purpose::trial, 7);
    rng::Stream b(42, rng::Purpose::trial, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct purposes and indices give distinct substreams") {
    rng::Stream a(42, rng::Purpose::trial, 7);
    rng::Stream b(42, rng::Purpose::signal, 7);
    rng::Stream c(42, rng::Purpose::trial, 8);
    rng::Stream d(43, rng::Purpose::trial, 7);
    const std::uint64_t va = a.next_u64();
    CHECK(va != b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
}

TEST_CASE("uniform lands in [0,1) with the right mean and variance") {
    rng::Stream s(1, rng::Purpose::trial, 0);
    const int trials = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double u = s.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / trials;
    const double var = sumsq / trials - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("uniform(lo, hi) respects the interval") {
    rng::Stream s(2, rng::Purpose::trial, 0);
    for (int i = 0; i < 1000; ++i) {
        const double u = s.uniform(3.0, 5.0);
        REQUIRE(u >= 3.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("gaussian moments match N(0,1)") {
    rng::Stream s(3, rng::Purpose::trial, 0);
    const int trials = 200000;
    double sum = 0.0, sumsq = 0.0, sum4 = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double g = s.gaussian();
        sum += g;
        sumsq += g * g;
        sum4 += g * g * g * g;
    }
    CHECK(sum / trials == doctest::Approx(0.0).epsilon(1.0).scale(0.01));
    CHECK(sumsq / trials == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sum4 / trials == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("gaussian_half has variance 1/2") {
    rng::Stream s(4, rng::Purpose::trial, 0);
    const int trials = 200000;
    double sumsq = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double g = s.gaussian_half();
        sumsq += g * g;
    }
    CHECK(sumsq / trials == doctest::Approx(0.5).epsilon(0.02));
}
