#pragma once

#include <cmath>
#include <cstdint>

#include "synclab/errors.hpp"

namespace synclab {

// Nonnegative real kept as mantissa * 2^exp2 so that truncated-exponential
// sums survive arguments whose partial terms overflow a double.
struct ScaledReal {
    double mantissa = 0.0;
    long exp2 = 0;

    static ScaledReal from(double v) {
        ScaledReal s;
        if (v == 0.0) return s;
        int e = 0;
        s.mantissa = std::frexp(v, &e);
        s.exp2 = e;
        return s;
    }

    double value() const { return std::ldexp(mantissa, static_cast<int>(exp2)); }
    double log() const { return std::log(mantissa) + exp2 * 0.6931471805599453; }

    ScaledReal& normalize() {
        if (mantissa == 0.0) {
            exp2 = 0;
            return *this;
        }
        int e = 0;
        mantissa = std::frexp(mantissa, &e);
        exp2 += e;
        return *this;
    }

    ScaledReal operator*(const ScaledReal& o) const {
        ScaledReal r{mantissa * o.mantissa, exp2 + o.exp2};
        return r.normalize();
    }

    ScaledReal operator+(const ScaledReal& o) const {
        if (mantissa == 0.0) return o;
        if (o.mantissa == 0.0) return *this;
        const ScaledReal *hi = this, *lo = &o;
        if (o.exp2 > exp2) std::swap(hi, lo);
        const long shift = hi->exp2 - lo->exp2;
        if (shift > 1100) return *hi;
        ScaledReal r{hi->mantissa + std::ldexp(lo->mantissa, static_cast<int>(-shift)), hi->exp2};
        return r.normalize();
    }
};

// exp_{<=D}(x) = sum_{k=0}^D x^k / k!, by the term recurrence
// term_k = term_{k-1} * x / k. Accumulation switches to the scaled
// representation once a partial term would pass 2^900.
inline ScaledReal exp_truncated_scaled(double x, int D) {
    if (D < 0) throw invalid_parameter("exp_truncated: D must be >= 0");
    ScaledReal sum = ScaledReal::from(1.0);
    ScaledReal term = ScaledReal::from(1.0);
    const ScaledReal sx = ScaledReal::from(std::abs(x));
    const bool negative = x < 0.0;
    double sign = 1.0;
    for (int k = 1; k <= D; ++k) {
        term = term * sx;
        term.mantissa /= k;
        term.normalize();
        if (negative) sign = -sign;
        if (sign > 0) {
            sum = sum + term;
        } else {
            // Negative arguments stay small in this artifact; fall back to
            // plain doubles for the subtraction.
            ScaledReal neg = term;
            neg.mantissa = -neg.mantissa;
            sum = sum + neg;
        }
    }
    return sum;
}

inline double exp_truncated(double x, int D) {
    if (D < 0) throw invalid_parameter("exp_truncated: D must be >= 0");
    if (std::abs(x) < 600.0) {
        double sum = 1.0, term = 1.0;
        for (int k = 1; k <= D; ++k) {
            term *= x / k;
            sum += term;
        }
        return sum;
    }
    return exp_truncated_scaled(x, D).value();
}

// E[exp_{<=D}(lambda^2 zeta^2)] for zeta ~ N(0, 1/2), in closed form:
// sum_{k<=D} lambda^(2k) (2k-1)!! / (2^k k!).
inline double gaussian_truncated_moment(double lambda, int D) {
    if (D < 0) throw invalid_parameter("gaussian_truncated_moment: D must be >= 0");
    const double t = lambda * lambda;
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= D; ++k) {
        term *= t * (2.0 * k - 1.0) / (2.0 * k);
        sum += term;
    }
    return sum;
}

}  // namespace synclab
