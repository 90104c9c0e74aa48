#include <doctest.h>

#include <cmath>

#include "synclab/advantage.hpp"

using namespace synclab;

namespace {

bool within_pooled(double a, double sa, double b, double sb, double k = 3.0) {
    return std::abs(a - b) <= k * std::sqrt(sa * sa + sb * sb) + 1e-12;
}

}  // namespace

TEST_CASE("uv_statistics matches direct evaluation") {
    const PhaseSignal x({0.3, 1.9, 5.1, 2.2, 4.4});
    const int L = 6;
    const UVStats st = uv_statistics(x, L);
    for (int l = 1; l <= L; ++l) {
        double u = 0.0, v = 0.0;
        for (int k = 0; k < x.n(); ++k) {
            u += std::sin(l * x.phase(k));
            v += std::cos(l * x.phase(k));
        }
        u /= std::sqrt(5.0);
        v /= std::sqrt(5.0);
        CHECK(st.u[static_cast<std::size_t>(l - 1)] == doctest::Approx(u).epsilon(1e-12));
        CHECK(st.v[static_cast<std::size_t>(l - 1)] == doctest::Approx(v).epsilon(1e-12));
    }
    CHECK_THROWS_AS(uv_statistics(x, 0), invalid_parameter);
}

TEST_CASE("lambda = 0 advantage is exactly 1 with zero stderr") {
    const AdvantageEstimate est = advantage_mc({16, 3, 0.0, 1}, 4, 500);
    CHECK(est.adv_squared == 1.0);
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("quadrature reproduces the D = 1 closed form 1 + L lambda^2") {
    for (int n : {1, 2, 3})
        for (int L : {1, 2, 3})
            for (double lambda : {0.5, 0.9}) {
                const AdvantageEstimate est = advantage_quadrature({n, L, lambda, 0}, 1);
                CHECK(est.adv_squared ==
                      doctest::Approx(1.0 + L * lambda * lambda).epsilon(1e-9));
                CHECK(est.stderr_ == 0.0);
            }
}

TEST_CASE("quadrature at n = 1, L = 1 is the constant integrand exp_truncated(lambda^2)") {
    for (int D : {1, 3, 6})
        CHECK(advantage_quadrature({1, 1, 0.9, 0}, D).adv_squared ==
              doctest::Approx(exp_truncated(0.81, D)).epsilon(1e-12));
}

TEST_CASE("quadrature matches frozen reference integrals at n = 2, L = 1") {
    CHECK(advantage_quadrature({2, 1, 0.9, 0}, 2).adv_squared ==
          doctest::Approx(2.302075).epsilon(1e-9));
    CHECK(advantage_quadrature({2, 1, 0.9, 0}, 6).adv_squared ==
          doctest::Approx(2.6305246583891242).epsilon(1e-9));
    CHECK(advantage_quadrature({2, 1, 0.5, 0}, 4).adv_squared ==
          doctest::Approx(1.3040974934895833).epsilon(1e-9));
}

TEST_CASE("quadrature is converged: doubling the nodes does not move the value") {
    for (int n : {2, 3}) {
        const double coarse = advantage_quadrature({n, 3, 0.9, 0}, 6, 64).adv_squared;
        const double fine = advantage_quadrature({n, 3, 0.9, 0}, 6, 128).adv_squared;
        CHECK(coarse == doctest::Approx(fine).epsilon(1e-9));
    }
    CHECK_THROWS_AS(advantage_quadrature({4, 1, 0.5, 0}, 2), budget_exceeded);
    CHECK_THROWS_AS(advantage_quadrature({2, 1, 0.5, 0}, 2, 4), invalid_parameter);
}

TEST_CASE("MC routes agree with the quadrature oracle within 3 pooled stderr") {
    const ModelParams params{3, 2, 0.9, 21};
    for (int D : {1, 4}) {
        const double oracle = advantage_quadrature(params, D).adv_squared;
        const AdvantageEstimate mc = advantage_mc(params, D, 20000);
        const AdvantageEstimate two = advantage_two_replica_mc(params, D, 20000);
        CHECK(within_pooled(mc.adv_squared, mc.stderr_, oracle, 0.0));
        CHECK(within_pooled(two.adv_squared, two.stderr_, oracle, 0.0));
    }
}

TEST_CASE("median-of-means aggregation stays close to the oracle too") {
    const ModelParams params{2, 2, 0.9, 5};
    const double oracle = advantage_quadrature(params, 3).adv_squared;
    const AdvantageEstimate est = advantage_mc(params, 3, 20000, McEstimator::median_of_means);
    CHECK(within_pooled(est.adv_squared, est.stderr_, oracle, 4.0));
}

TEST_CASE("quadrature advantage is monotone in D and in lambda") {
    const ModelParams base{3, 2, 0.7, 0};
    double prev = 0.0;
    for (int D = 1; D <= 8; ++D) {
        const double v = advantage_quadrature(base, D).adv_squared;
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0.0;
    for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double v = advantage_quadrature({3, 2, lambda, 0}, 5).adv_squared;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("gaussian surrogate closed forms") {
    const AdvantageEstimate trunc = gaussian_surrogate({2048, 4, 0.9, 0}, 6);
    CHECK(trunc.adv_squared == doctest::Approx(356.2425974705094).epsilon(1e-9));
    const AdvantageEstimate full = gaussian_surrogate({2048, 3, 0.9, 0}, 6, SurrogateMode::full);
    CHECK(full.adv_squared == doctest::Approx(std::pow(1.0 - 0.81, -3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_surrogate({8, 1, 1.0, 0}, 2, SurrogateMode::full), domain_error);
}

TEST_CASE("log of the full surrogate grows linearly in L with slope -log(1-lambda^2)") {
    const double lambda = 0.9;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = 8;
    for (int L = 1; L <= count; ++L) {
        const double y =
            std::log(gaussian_surrogate({8, L, lambda, 0}, 1, SurrogateMode::full).adv_squared);
        sx += L;
        sy += y;
        sxx += static_cast<double>(L) * L;
        sxy += L * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-std::log(1.0 - lambda * lambda)).epsilon(1e-12));
}

TEST_CASE("interpolation path endpoints match their closed counterparts") {
    const ModelParams params{16, 2, 0.9, 33};
    const int D = 4;
    const auto path = interpolation_path(params, D, {0, 16}, 20000);
    REQUIRE(path.size() == 2);
    CHECK(path[0].t == 0);
    CHECK(path[1].t == 16);

    // t = 0 is the relaxed product form; at this scale it agrees with the
    // independently sampled estimate of the same functional.
    const AdvantageEstimate relaxed = advantage_relaxed_mc({16, 2, 0.9, 77}, D, 20000);
    CHECK(within_pooled(path[0].f_t, path[0].stderr_, relaxed.adv_squared, relaxed.stderr_));

    // t = n is exactly the truncated Gaussian surrogate in distribution.
    const double surrogate = gaussian_surrogate(params, D).adv_squared;
    CHECK(within_pooled(path[1].f_t, path[1].stderr_, surrogate, 0.0));

    CHECK_THROWS_AS(interpolation_path(params, D, {-1}, 1000), invalid_parameter);
    CHECK_THROWS_AS(interpolation_path(params, D, {17}, 1000), invalid_parameter);
}

TEST_CASE("interpolation path handles unsorted grids with duplicates") {
    const ModelParams params{8, 1, 0.5, 4};
    const auto path = interpolation_path(params, 3, {8, 0, 8}, 500);
    REQUIRE(path.size() == 3);
    CHECK(path[0].t == 8);
    CHECK(path[1].t == 0);
    CHECK(path[0].f_t == path[2].f_t);
}

TEST_CASE("statistical thresholds reproduce the cited values") {
    const Thresholds t11 = statistical_thresholds(11);
    CHECK(t11.upper == doctest::Approx(0.9793661772388039).epsilon(1e-12));
    CHECK(!t11.lower_is_cited);
    const Thresholds t10 = statistical_thresholds(10);
    CHECK(t10.upper == doctest::Approx(1.0116180862567642).epsilon(1e-12));
    CHECK(t11.upper < 1.0);
    CHECK(t10.upper >= 1.0);
    const Thresholds t3 = statistical_thresholds(3);
    CHECK(t3.lower == doctest::Approx(0.9613512577339220).epsilon(1e-12));
    const Thresholds t2 = statistical_thresholds(2);
    CHECK(t2.lower == 0.937);
    CHECK(t2.lower_is_cited);
    CHECK_THROWS_AS(statistical_thresholds(1), domain_error);
}
