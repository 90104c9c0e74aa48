#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <vector>

#include "synclab/errors.hpp"

namespace synclab {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

// Laurent polynomial in z = e^{i theta} with exact Gaussian-rational
// coefficients, indexed by frequency.
struct GaussRat {
    Rational re = 0;
    Rational im = 0;
};

using LaurentPoly = std::map<long, GaussRat>;

inline GaussRat mul(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline LaurentPoly multiply(const LaurentPoly& p, const LaurentPoly& q) {
    LaurentPoly r;
    for (const auto& [fp, cp] : p)
        for (const auto& [fq, cq] : q) {
            GaussRat prod = mul(cp, cq);
            GaussRat& slot = r[fp + fq];
            slot.re += prod.re;
            slot.im += prod.im;
        }
    return r;
}

inline void check_moment_budget(const std::vector<int>& alphas, const std::vector<int>& betas) {
    if (alphas.size() != betas.size())
        throw invalid_parameter("moment oracle: alphas and betas must have equal length");
    if (alphas.size() > 8) throw budget_exceeded("moment oracle: expansion budget requires L <= 8");
    long total = 0;
    for (int a : alphas) {
        if (a < 0) throw invalid_parameter("moment oracle: exponents must be >= 0");
        total += a;
    }
    for (int b : betas) {
        if (b < 0) throw invalid_parameter("moment oracle: exponents must be >= 0");
        total += b;
    }
    if (total > 24)
        throw budget_exceeded("moment oracle: expansion budget requires total degree <= 24");
}

}  // namespace detail

// E_theta[ prod_l sin(l theta)^{alpha_l} cos(l theta)^{beta_l} ] for a single
// uniform theta: each factor is expanded into complex exponentials with exact
// coefficients (sin = (z^l - z^{-l})/(2i), cos = (z^l + z^{-l})/2) and the
// expectation is the frequency-zero coefficient.
inline Rational trig_moment_exact(const std::vector<int>& alphas, const std::vector<int>& betas) {
    detail::check_moment_budget(alphas, betas);
    detail::LaurentPoly poly;
    poly[0] = {Rational(1), Rational(0)};
    const Rational half(1, 2);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const long l = static_cast<long>(i) + 1;
        // sin(l theta) = (z^l - z^{-l}) / (2i) = -i/2 z^l + i/2 z^{-l}
        detail::LaurentPoly sin_factor;
        sin_factor[l] = {Rational(0), -half};
        sin_factor[-l] = {Rational(0), half};
        for (int a = 0; a < alphas[i]; ++a) poly = detail::multiply(poly, sin_factor);
        detail::LaurentPoly cos_factor;
        cos_factor[l] = {half, Rational(0)};
        cos_factor[-l] = {half, Rational(0)};
        for (int b = 0; b < betas[i]; ++b) poly = detail::multiply(poly, cos_factor);
    }
    auto it = poly.find(0);
    if (it == poly.end()) return Rational(0);
    if (it->second.im != 0)
        throw domain_error("trig_moment_exact: nonreal constant term (internal inconsistency)");
    return it->second.re;
}

// prod_l m(alpha_l) m(beta_l) where m(2k) = (2k-1)!!/2^k and m(odd) = 0: the
// matching moments when every coordinate is an independent N(0,1/2) Gaussian.
inline Rational gaussian_moment_exact(const std::vector<int>& alphas,
                                      const std::vector<int>& betas) {
    detail::check_moment_budget(alphas, betas);
    auto m = [](int deg) -> Rational {
        if (deg % 2 != 0) return Rational(0);
        Rational r = 1;
        for (int k = 1; k <= deg / 2; ++k) r *= Rational(2 * k - 1, 2);
        return r;
    };
    Rational prod = 1;
    for (std::size_t i = 0; i < alphas.size(); ++i) prod *= m(alphas[i]) * m(betas[i]);
    return prod;
}

// The moment difference from the Lindeberg swap step; vanishes identically
// whenever the total degree is at most 2.
inline Rational moment_gap(const std::vector<int>& alphas, const std::vector<int>& betas) {
    return trig_moment_exact(alphas, betas) - gaussian_moment_exact(alphas, betas);
}

}  // namespace synclab
