#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "synclab/model.hpp"
#include "synclab/rng.hpp"
#include "synclab/truncated_exp.hpp"

namespace synclab {

// U_l = n^{-1/2} sum_t sin(l theta_t), V_l = n^{-1/2} sum_t cos(l theta_t).
struct UVStats {
    std::vector<double> u;
    std::vector<double> v;
};

enum class AdvMethod {
    mc_single,
    mc_two_replica,
    mc_relaxed_product,
    quadrature,
    gaussian_surrogate_truncated,
    gaussian_surrogate_full,
};

inline const char* to_string(AdvMethod m) {
    switch (m) {
        case AdvMethod::mc_single: return "mc_single";
        case AdvMethod::mc_two_replica: return "mc_two_replica";
        case AdvMethod::mc_relaxed_product: return "mc_relaxed_product";
        case AdvMethod::quadrature: return "quadrature";
        case AdvMethod::gaussian_surrogate_truncated: return "gaussian_surrogate_truncated";
        case AdvMethod::gaussian_surrogate_full: return "gaussian_surrogate_full";
    }
    return "unknown";
}

struct AdvantageEstimate {
    double adv_squared = 1.0;
    double stderr_ = 0.0;
    AdvMethod method = AdvMethod::mc_single;
    ModelParams params;
    int D = 0;
    long samples = 0;
};

enum class McEstimator { mean, median_of_means };

namespace detail {

// Per-frequency sums of sin(l theta_t) and cos(l theta_t), l = 1..L, via the
// angle-addition recurrence so only one sincos per angle is needed.
inline void trig_channel_sums(const std::vector<double>& phases, int L, double* sin_sums,
                              double* cos_sums) {
    for (int l = 0; l < L; ++l) sin_sums[l] = cos_sums[l] = 0.0;
    std::vector<double> s(static_cast<std::size_t>(L)), c(static_cast<std::size_t>(L));
    for (double th : phases) {
        const double s1 = std::sin(th), c1 = std::cos(th);
        s[0] = s1;
        c[0] = c1;
        for (int l = 1; l < L; ++l) {
            s[static_cast<std::size_t>(l)] = s[static_cast<std::size_t>(l - 1)] * c1 +
                                             c[static_cast<std::size_t>(l - 1)] * s1;
            c[static_cast<std::size_t>(l)] = c[static_cast<std::size_t>(l - 1)] * c1 -
                                             s[static_cast<std::size_t>(l - 1)] * s1;
        }
        for (int l = 0; l < L; ++l) {
            sin_sums[l] += s[static_cast<std::size_t>(l)];
            cos_sums[l] += c[static_cast<std::size_t>(l)];
        }
    }
}

struct McAccumulator {
    explicit McAccumulator(long samples, int blocks = 20)
        : block_size_((samples + blocks - 1) / blocks), block_sums_(static_cast<std::size_t>(blocks), 0.0L) {}

    void add(long index, double value) {
        sum_ += value;
        sumsq_ += static_cast<long double>(value) * value;
        ++count_;
        block_sums_[static_cast<std::size_t>(
            std::min<long>(index / block_size_, static_cast<long>(block_sums_.size()) - 1))] += value;
        block_counts_.resize(block_sums_.size(), 0);
        ++block_counts_[static_cast<std::size_t>(
            std::min<long>(index / block_size_, static_cast<long>(block_sums_.size()) - 1))];
    }

    double mean() const { return static_cast<double>(sum_ / count_); }

    double mean_stderr() const {
        if (count_ < 2) return 0.0;
        const long double m = sum_ / count_;
        long double var = (sumsq_ - count_ * m * m) / (count_ - 1);
        if (var < 0) var = 0;
        return static_cast<double>(std::sqrt(var / count_));
    }

    std::pair<double, double> median_of_means() const {
        std::vector<double> means;
        for (std::size_t b = 0; b < block_sums_.size(); ++b)
            if (block_counts_[b] > 0)
                means.push_back(static_cast<double>(block_sums_[b] / block_counts_[b]));
        std::sort(means.begin(), means.end());
        const std::size_t m = means.size();
        const double med = (m % 2 == 1) ? means[m / 2] : 0.5 * (means[m / 2 - 1] + means[m / 2]);
        double mu = 0;
        for (double x : means) mu += x;
        mu /= static_cast<double>(m);
        double var = 0;
        for (double x : means) var += (x - mu) * (x - mu);
        var = (m > 1) ? var / static_cast<double>(m - 1) : 0.0;
        return {med, std::sqrt(var / static_cast<double>(m))};
    }

  private:
    long block_size_;
    long double sum_ = 0.0L, sumsq_ = 0.0L;
    long count_ = 0;
    std::vector<long double> block_sums_;
    std::vector<long> block_counts_;
};

inline AdvantageEstimate finish(McAccumulator& acc, McEstimator estimator, AdvMethod method,
                                const ModelParams& params, int D, long samples) {
    AdvantageEstimate est;
    est.method = method;
    est.params = params;
    est.D = D;
    est.samples = samples;
    if (estimator == McEstimator::mean) {
        est.adv_squared = acc.mean();
        est.stderr_ = acc.mean_stderr();
    } else {
        auto [med, se] = acc.median_of_means();
        est.adv_squared = med;
        est.stderr_ = se;
    }
    return est;
}

}  // namespace detail

inline UVStats uv_statistics(const PhaseSignal& x, int L) {
    if (L < 1) throw invalid_parameter("uv_statistics: L must be >= 1");
    UVStats st;
    st.u.resize(static_cast<std::size_t>(L));
    st.v.resize(static_cast<std::size_t>(L));
    detail::trig_channel_sums(x.phases(), L, st.u.data(), st.v.data());
    const double inv = 1.0 / std::sqrt(static_cast<double>(x.n()));
    for (int l = 0; l < L; ++l) {
        st.u[static_cast<std::size_t>(l)] *= inv;
        st.v[static_cast<std::size_t>(l)] *= inv;
    }
    return st;
}

// Adv^2 = E_x[ exp_{<=D}( lambda^2 sum_l (U_l^2 + V_l^2) ) ], by Monte Carlo
// over fresh phase draws.
inline AdvantageEstimate advantage_mc(const ModelParams& params, int D, long samples,
                                      McEstimator estimator = McEstimator::mean) {
    params.validate();
    if (samples < 100) throw invalid_parameter("advantage_mc: need samples >= 100");
    const double lam2 = params.lambda * params.lambda;
    detail::McAccumulator acc(samples);
    if (lam2 == 0.0) {
        AdvantageEstimate est;
        est.method = AdvMethod::mc_single;
        est.params = params;
        est.D = D;
        est.samples = samples;
        est.adv_squared = 1.0;
        est.stderr_ = 0.0;
        return est;
    }
    std::vector<double> ss(static_cast<std::size_t>(params.L)), cs(static_cast<std::size_t>(params.L));
    for (long i = 0; i < samples; ++i) {
        PhaseSignal x = sample_phases(
            params.n, rng::Stream(params.seed, rng::Purpose::trial, static_cast<std::uint64_t>(i)));
        detail::trig_channel_sums(x.phases(), params.L, ss.data(), cs.data());
        double arg = 0.0;
        for (int l = 0; l < params.L; ++l)
            arg += ss[static_cast<std::size_t>(l)] * ss[static_cast<std::size_t>(l)] +
                   cs[static_cast<std::size_t>(l)] * cs[static_cast<std::size_t>(l)];
        arg *= lam2 / params.n;
        acc.add(i, exp_truncated(arg, D));
    }
    return detail::finish(acc, estimator, AdvMethod::mc_single, params, D, samples);
}

// Same quantity via the two-replica form: averages
// exp_{<=D}( (lambda^2/n) sum_l |<x^(l), x'^(l)>|^2 ) over independent pairs.
inline AdvantageEstimate advantage_two_replica_mc(const ModelParams& params, int D, long samples,
                                                  McEstimator estimator = McEstimator::mean) {
    params.validate();
    if (samples < 100) throw invalid_parameter("advantage_two_replica_mc: need samples >= 100");
    const double lam2 = params.lambda * params.lambda;
    detail::McAccumulator acc(samples);
    std::vector<double> ss(static_cast<std::size_t>(params.L)), cs(static_cast<std::size_t>(params.L));
    for (long i = 0; i < samples; ++i) {
        rng::Stream sa(params.seed, rng::Purpose::trial, 2 * static_cast<std::uint64_t>(i));
        rng::Stream sb(params.seed, rng::Purpose::trial, 2 * static_cast<std::uint64_t>(i) + 1);
        std::vector<double> delta(static_cast<std::size_t>(params.n));
        for (double& d : delta) d = sa.uniform(0.0, kTwoPi) - sb.uniform(0.0, kTwoPi);
        // <x^(l), x'^(l)> = sum_t exp(i l (theta_t - theta'_t)).
        PhaseSignal diff{std::move(delta)};
        detail::trig_channel_sums(diff.phases(), params.L, ss.data(), cs.data());
        double arg = 0.0;
        for (int l = 0; l < params.L; ++l)
            arg += ss[static_cast<std::size_t>(l)] * ss[static_cast<std::size_t>(l)] +
                   cs[static_cast<std::size_t>(l)] * cs[static_cast<std::size_t>(l)];
        arg *= lam2 / params.n;
        acc.add(i, exp_truncated(arg, D));
    }
    return detail::finish(acc, estimator, AdvMethod::mc_two_replica, params, D, samples);
}

// Deterministic oracle for the same integrand: periodic-trapezoid tensor
// quadrature over [0, 2pi)^n. Spectrally accurate, and exact once the number
// of points per dimension exceeds the trig-polynomial bandwidth L*D.
inline AdvantageEstimate advantage_quadrature(const ModelParams& params, int D,
                                              int points_per_dim = 64) {
    params.validate();
    if (params.n > 3) throw budget_exceeded("advantage_quadrature: tensor budget requires n <= 3");
    if (points_per_dim < 8) throw invalid_parameter("advantage_quadrature: need points_per_dim >= 8");
    const int n = params.n, L = params.L, P = points_per_dim;
    const double lam2 = params.lambda * params.lambda;
    long nodes = 1;
    for (int j = 0; j < n; ++j) nodes *= P;
    std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
    long double total = 0.0L;
    std::vector<double> ss(static_cast<std::size_t>(L)), cs(static_cast<std::size_t>(L));
    for (long node = 0; node < nodes; ++node) {
        long idx = node;
        for (int j = 0; j < n; ++j) {
            theta[static_cast<std::size_t>(j)] = kTwoPi * static_cast<double>(idx % P) / P;
            idx /= P;
        }
        detail::trig_channel_sums(theta, L, ss.data(), cs.data());
        double arg = 0.0;
        for (int l = 0; l < L; ++l)
            arg += ss[static_cast<std::size_t>(l)] * ss[static_cast<std::size_t>(l)] +
                   cs[static_cast<std::size_t>(l)] * cs[static_cast<std::size_t>(l)];
        total += exp_truncated(lam2 * arg / n, D);
    }
    AdvantageEstimate est;
    est.method = AdvMethod::quadrature;
    est.params = params;
    est.D = D;
    est.samples = nodes;
    est.adv_squared = static_cast<double>(total / nodes);
    est.stderr_ = 0.0;
    return est;
}

enum class SurrogateMode { truncated, full };

// Gaussian stand-in for the interpolation endpoint: per-frequency moments of
// exp_{<=D}(lambda^2 zeta^2), zeta ~ N(0,1/2), raised to the 2L independent
// coordinates; full mode is the untruncated (1 - lambda^2)^{-L}.
inline AdvantageEstimate gaussian_surrogate(const ModelParams& params, int D,
                                            SurrogateMode mode = SurrogateMode::truncated) {
    params.validate();
    AdvantageEstimate est;
    est.params = params;
    est.D = D;
    est.samples = 0;
    est.stderr_ = 0.0;
    if (mode == SurrogateMode::truncated) {
        est.method = AdvMethod::gaussian_surrogate_truncated;
        est.adv_squared = std::pow(gaussian_truncated_moment(params.lambda, D), 2.0 * params.L);
    } else {
        if (params.lambda >= 1.0)
            throw domain_error("gaussian_surrogate: full mode requires lambda < 1");
        est.method = AdvMethod::gaussian_surrogate_full;
        est.adv_squared = std::pow(1.0 - params.lambda * params.lambda, -static_cast<double>(params.L));
    }
    return est;
}

// MC estimate of the relaxed product-form bound
// E_x[ prod_l exp_{<=D}(lambda^2 U_l^2) exp_{<=D}(lambda^2 V_l^2) ],
// i.e. the interpolation path at t = 0.
inline AdvantageEstimate advantage_relaxed_mc(const ModelParams& params, int D, long samples,
                                              McEstimator estimator = McEstimator::mean) {
    params.validate();
    if (samples < 100) throw invalid_parameter("advantage_relaxed_mc: need samples >= 100");
    const double lam2 = params.lambda * params.lambda;
    detail::McAccumulator acc(samples);
    std::vector<double> ss(static_cast<std::size_t>(params.L)), cs(static_cast<std::size_t>(params.L));
    const double inv_n = 1.0 / params.n;
    for (long i = 0; i < samples; ++i) {
        PhaseSignal x = sample_phases(
            params.n, rng::Stream(params.seed, rng::Purpose::trial, static_cast<std::uint64_t>(i)));
        detail::trig_channel_sums(x.phases(), params.L, ss.data(), cs.data());
        double value = 1.0;
        for (int l = 0; l < params.L; ++l) {
            const double u2 = ss[static_cast<std::size_t>(l)] * ss[static_cast<std::size_t>(l)] * inv_n;
            const double v2 = cs[static_cast<std::size_t>(l)] * cs[static_cast<std::size_t>(l)] * inv_n;
            value *= exp_truncated(lam2 * u2, D) * exp_truncated(lam2 * v2, D);
        }
        acc.add(i, value);
    }
    return detail::finish(acc, estimator, AdvMethod::mc_relaxed_product, params, D, samples);
}

struct InterpolationPoint {
    int t = 0;
    double f_t = 1.0;
    double stderr_ = 0.0;
};

// Lindeberg path F_t: the first t summands of each U_l, V_l are Gaussian
// N(0,1/2), the remaining n-t are trigonometric. One phase draw and one
// Gaussian draw per trial are shared across the whole grid (common random
// numbers); the Gaussian part enters only through its partial sums, so one
// N(0, dt/2) increment per grid segment per frequency suffices.
inline std::vector<InterpolationPoint> interpolation_path(const ModelParams& params, int D,
                                                          const std::vector<int>& t_grid,
                                                          long samples,
                                                          McEstimator estimator = McEstimator::mean) {
    params.validate();
    if (samples < 100) throw invalid_parameter("interpolation_path: need samples >= 100");
    for (int t : t_grid)
        if (t < 0 || t > params.n)
            throw invalid_parameter("interpolation_path: every t must lie in [0, n]");
    const int n = params.n, L = params.L;
    const double lam2 = params.lambda * params.lambda;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    std::vector<int> sorted = t_grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const int G = static_cast<int>(sorted.size());

    std::vector<detail::McAccumulator> acc(static_cast<std::size_t>(G),
                                           detail::McAccumulator(samples));
    // prefix trig sums at grid points, per frequency
    std::vector<double> trig_prefix_s(static_cast<std::size_t>(G * L)),
        trig_prefix_c(static_cast<std::size_t>(G * L));
    std::vector<double> total_s(static_cast<std::size_t>(L)), total_c(static_cast<std::size_t>(L));
    std::vector<double> gauss_s(static_cast<std::size_t>(G * L)), gauss_c(static_cast<std::size_t>(G * L));
    std::vector<double> s(static_cast<std::size_t>(L)), c(static_cast<std::size_t>(L));

    for (long trial = 0; trial < samples; ++trial) {
        rng::Stream phase_stream(params.seed, rng::Purpose::trial, 2 * static_cast<std::uint64_t>(trial));
        rng::Stream gauss_stream(params.seed, rng::Purpose::trial, 2 * static_cast<std::uint64_t>(trial) + 1);

        std::fill(total_s.begin(), total_s.end(), 0.0);
        std::fill(total_c.begin(), total_c.end(), 0.0);
        int gi = 0;
        while (gi < G && sorted[static_cast<std::size_t>(gi)] == 0) {
            for (int l = 0; l < L; ++l) {
                trig_prefix_s[static_cast<std::size_t>(gi * L + l)] = 0.0;
                trig_prefix_c[static_cast<std::size_t>(gi * L + l)] = 0.0;
            }
            ++gi;
        }
        for (int j = 1; j <= n; ++j) {
            const double th = phase_stream.uniform(0.0, kTwoPi);
            const double s1 = std::sin(th), c1 = std::cos(th);
            s[0] = s1;
            c[0] = c1;
            for (int l = 1; l < L; ++l) {
                s[static_cast<std::size_t>(l)] =
                    s[static_cast<std::size_t>(l - 1)] * c1 + c[static_cast<std::size_t>(l - 1)] * s1;
                c[static_cast<std::size_t>(l)] =
                    c[static_cast<std::size_t>(l - 1)] * c1 - s[static_cast<std::size_t>(l - 1)] * s1;
            }
            for (int l = 0; l < L; ++l) {
                total_s[static_cast<std::size_t>(l)] += s[static_cast<std::size_t>(l)];
                total_c[static_cast<std::size_t>(l)] += c[static_cast<std::size_t>(l)];
            }
            while (gi < G && sorted[static_cast<std::size_t>(gi)] == j) {
                for (int l = 0; l < L; ++l) {
                    trig_prefix_s[static_cast<std::size_t>(gi * L + l)] = total_s[static_cast<std::size_t>(l)];
                    trig_prefix_c[static_cast<std::size_t>(gi * L + l)] = total_c[static_cast<std::size_t>(l)];
                }
                ++gi;
            }
        }
        // Gaussian partial sums at the grid points, one increment per segment.
        int prev = 0;
        for (int g = 0; g < G; ++g) {
            const int t = sorted[static_cast<std::size_t>(g)];
            const double sd = std::sqrt(0.5 * (t - prev));
            for (int l = 0; l < L; ++l) {
                const double base_s = (g > 0) ? gauss_s[static_cast<std::size_t>((g - 1) * L + l)] : 0.0;
                const double base_c = (g > 0) ? gauss_c[static_cast<std::size_t>((g - 1) * L + l)] : 0.0;
                gauss_s[static_cast<std::size_t>(g * L + l)] = base_s + sd * gauss_stream.gaussian();
                gauss_c[static_cast<std::size_t>(g * L + l)] = base_c + sd * gauss_stream.gaussian();
            }
            prev = t;
        }
        for (int g = 0; g < G; ++g) {
            double value = 1.0;
            for (int l = 0; l < L; ++l) {
                const double u = (gauss_s[static_cast<std::size_t>(g * L + l)] +
                                  total_s[static_cast<std::size_t>(l)] -
                                  trig_prefix_s[static_cast<std::size_t>(g * L + l)]) * inv_sqrt_n;
                const double v = (gauss_c[static_cast<std::size_t>(g * L + l)] +
                                  total_c[static_cast<std::size_t>(l)] -
                                  trig_prefix_c[static_cast<std::size_t>(g * L + l)]) * inv_sqrt_n;
                value *= exp_truncated(lam2 * u * u, D) * exp_truncated(lam2 * v * v, D);
            }
            acc[static_cast<std::size_t>(g)].add(trial, value);
        }
    }

    std::vector<InterpolationPoint> out;
    out.reserve(t_grid.size());
    for (int t : t_grid) {
        const int g = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
        InterpolationPoint p;
        p.t = t;
        if (estimator == McEstimator::mean) {
            p.f_t = acc[static_cast<std::size_t>(g)].mean();
            p.stderr_ = acc[static_cast<std::size_t>(g)].mean_stderr();
        } else {
            auto [med, se] = acc[static_cast<std::size_t>(g)].median_of_means();
            p.f_t = med;
            p.stderr_ = se;
        }
        out.push_back(p);
    }
    return out;
}

struct Thresholds {
    double lower = 0.0;
    bool lower_is_cited = false;  // L = 2 carries the cited constant 0.937
    double upper = 0.0;
};

// Statistical thresholds: below `lower` detection is impossible, above
// `upper` an inefficient algorithm succeeds. For L = 2 the lower value is the
// cited constant rather than the general formula.
inline Thresholds statistical_thresholds(int L) {
    if (L < 2) throw domain_error("statistical_thresholds: L must be >= 2");
    Thresholds th;
    th.upper = std::sqrt(4.0 * std::log(static_cast<double>(L)) / (L - 1));
    if (L == 2) {
        th.lower = 0.937;
        th.lower_is_cited = true;
    } else {
        th.lower = std::sqrt(2.0 * (L - 1) * std::log(static_cast<double>(L - 1)) /
                             (static_cast<double>(L) * (L - 2)));
    }
    return th;
}

}  // namespace synclab
