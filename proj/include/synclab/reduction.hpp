#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "synclab/estimators.hpp"
#include "synclab/model.hpp"
#include "synclab/records.hpp"

namespace synclab {

// The noise-splitting channels A_l = (Y_l + kappa Z_l)/sqrt(1+kappa^2) and
// B_l = (Y_l - Z_l/kappa)/sqrt(1+kappa^{-2}); under the null both are GUE and
// mutually independent.
struct SplitChannels {
    std::vector<HermitianMatrix> a;
    std::vector<HermitianMatrix> b;
    double kappa = 1.0;
};

struct TestOutcome {
    double statistic = 0.0;
    double threshold = 0.0;
    bool decision = false;
};

inline SplitChannels split_channels(const JointObservation& joint, double kappa) {
    if (kappa <= 0) throw invalid_parameter("split_channels: kappa must be > 0");
    SplitChannels out;
    out.kappa = kappa;
    const double inv_a = 1.0 / std::sqrt(1.0 + kappa * kappa);
    const double inv_b = 1.0 / std::sqrt(1.0 + 1.0 / (kappa * kappa));
    const std::size_t L = joint.observation.channels.size();
    out.a.reserve(L);
    out.b.reserve(L);
    for (std::size_t l = 0; l < L; ++l) {
        const CMatrix& y = joint.observation.channels[l].mat();
        const CMatrix& z = joint.external[l].mat();
        out.a.push_back(HermitianMatrix((y + kappa * z) * inv_a));
        out.b.push_back(HermitianMatrix((y - z / kappa) * inv_b));
    }
    return out;
}

struct SplitSnr {
    double mu = 0.0;       // source SNR at which Y must be sampled
    double b_spike = 0.0;  // induced spike coefficient in the B channel
};

// For the A channel to carry SNR exactly lambda_a, the source must be sampled
// at mu = lambda_a sqrt(1+kappa^2); the B channel then carries
// b_spike = lambda_a kappa = mu / sqrt(1+kappa^{-2}).
inline SplitSnr planted_split_snr(double lambda_a, double kappa) {
    if (lambda_a < 0) throw invalid_parameter("planted_split_snr: lambda_a must be >= 0");
    if (kappa <= 0) throw invalid_parameter("planted_split_snr: kappa must be > 0");
    SplitSnr s;
    s.mu = lambda_a * std::sqrt(1.0 + kappa * kappa);
    s.b_spike = lambda_a * kappa;
    return s;
}

// The kappa-choice constraint: the split is only meaningful while the source
// SNR stays subcritical, i.e. lambda/(1+kappa^2) < 1.
inline bool kappa_constraint_ok(double lambda, double kappa) {
    return lambda / (1.0 + kappa * kappa) < 1.0;
}

// One-sided verification test on the first B channel: accept when
// <x_hat, B_1> >= (c lambda ||x_hat||_F / 4) sqrt((1+kappa^2) n / (1+kappa^{-2})).
// Both statistic and threshold scale linearly in x_hat, so the decision is
// invariant under positive rescaling of the estimator.
inline TestOutcome one_sided_test(const HermitianMatrix& x_hat, const HermitianMatrix& b1,
                                  double lambda, double kappa, double c) {
    if (c <= 0 || c > 1) throw invalid_parameter("one_sided_test: c must lie in (0, 1]");
    if (kappa <= 0) throw invalid_parameter("one_sided_test: kappa must be > 0");
    const double norm = x_hat.frobenius_norm();
    if (norm == 0.0) throw degenerate_estimator("one_sided_test: estimator has zero norm");
    TestOutcome out;
    out.statistic = x_hat.inner(b1);
    const double n = static_cast<double>(x_hat.dim());
    out.threshold = 0.25 * c * lambda * norm *
                    std::sqrt((1.0 + kappa * kappa) * n / (1.0 + 1.0 / (kappa * kappa)));
    out.decision = out.statistic >= out.threshold;
    return out;
}

enum class ReductionEstimator { oracle_signal, pca_channel1 };

inline const char* to_string(ReductionEstimator e) {
    return e == ReductionEstimator::oracle_signal ? "oracle_signal" : "pca_channel1";
}

namespace detail {

// One split-and-test trial. params.lambda is the A-channel SNR lambda_a; the
// source is sampled at mu from planted_split_snr (planted side) or as pure
// noise (null side). The reference signal for the oracle estimator comes from
// the trial's signal stream, so under the null it is independent of the data.
inline bool reduction_trial(const ModelParams& params, double kappa, double c,
                            ReductionEstimator estimator, std::uint64_t trial_master,
                            bool planted, double pca_tol = 1e-4, long pca_max_iter = 4000) {
    ModelParams source = params;
    const SplitSnr snr = planted_split_snr(params.lambda, kappa);
    source.lambda = planted ? snr.mu : 0.0;
    MultiFreqObservation obs;
    PhaseSignal x = sample_phases(params.n, rng::Stream(trial_master, rng::Purpose::signal));
    if (planted) {
        obs = sample_planted(source, trial_master).second;
    } else {
        source.lambda = params.lambda;  // keep the nominal SNR in the record
        obs = sample_null(source, trial_master);
    }
    SplitChannels split = split_channels(attach_external(std::move(obs), trial_master), kappa);

    HermitianMatrix x_hat = HermitianMatrix::zero(params.n);
    if (estimator == ReductionEstimator::oracle_signal) {
        const CVector v = x.vector();
        x_hat = HermitianMatrix(v * v.adjoint());
    } else {
        MultiFreqObservation a_obs;
        a_obs.params = params;
        a_obs.provenance = planted ? Provenance::planted : Provenance::null_model;
        a_obs.channels = std::move(split.a);
        x_hat = pca_estimate(a_obs, 1, pca_tol, pca_max_iter);
    }
    return one_sided_test(x_hat, split.b[0], params.lambda, kappa, c).decision;
}

inline RunRecord rate_record(const std::string& experiment, const ModelParams& params,
                             double kappa, double c, long trials, ReductionEstimator estimator,
                             long accepts) {
    RunRecord rec;
    rec.experiment = experiment;
    rec.set_param("n", params.n);
    rec.set_param("L", params.L);
    rec.set_param("lambda", params.lambda);
    rec.set_param("kappa", kappa);
    rec.set_param("c", c);
    rec.set_param("seed", params.seed);
    rec.set_param("trials", trials);
    rec.set_param("estimator", std::string(to_string(estimator)));
    const WilsonInterval w = wilson_interval(accepts, trials);
    rec.set_metric("accept_rate", w.rate);
    rec.set_metric("accept_lo", w.lo);
    rec.set_metric("accept_hi", w.hi);
    rec.set_metric("accepts", static_cast<double>(accepts));
    return rec;
}

}  // namespace detail

// Acceptance rates of the one-sided test under the planted and null laws.
// Returns two records: index 0 planted, index 1 null.
inline std::vector<RunRecord> roc_experiment(const ModelParams& params, double kappa, double c,
                                             long trials, ReductionEstimator estimator) {
    params.validate();
    if (trials < 100) throw invalid_parameter("roc_experiment: need trials >= 100");
    long p_accepts = 0, q_accepts = 0;
    for (long t = 0; t < trials; ++t) {
        const std::uint64_t p_master =
            rng::derive_key(params.seed, rng::Purpose::trial, 2 * static_cast<std::uint64_t>(t));
        const std::uint64_t q_master =
            rng::derive_key(params.seed, rng::Purpose::trial, 2 * static_cast<std::uint64_t>(t) + 1);
        if (detail::reduction_trial(params, kappa, c, estimator, p_master, true)) ++p_accepts;
        if (detail::reduction_trial(params, kappa, c, estimator, q_master, false)) ++q_accepts;
    }
    return {detail::rate_record("roc_planted", params, kappa, c, trials, estimator, p_accepts),
            detail::rate_record("roc_null", params, kappa, c, trials, estimator, q_accepts)};
}

// Composed hidden-sample detection: the null shows M independent null
// samples; the alternative plants one sample at a uniform hidden index. The
// detector fires when any per-sample test fires.
inline RunRecord hidden_sample_detection(const ModelParams& params, int M, long trials,
                                         double kappa, double c, ReductionEstimator estimator) {
    params.validate();
    if (M < 1) throw invalid_parameter("hidden_sample_detection: M must be >= 1");
    if (trials < 100) throw invalid_parameter("hidden_sample_detection: need trials >= 100");
    long null_fires = 0, alt_fires = 0, per_sample_fp = 0;
    rng::Stream index_stream(params.seed, rng::Purpose::mle);  // hidden index draws
    for (long t = 0; t < trials; ++t) {
        const int hidden = static_cast<int>(index_stream.next_u64() % static_cast<std::uint64_t>(M));
        bool null_fired = false, alt_fired = false;
        for (int i = 0; i < M; ++i) {
            // Matches roc_experiment's stream layout, so M = 1 reproduces its rates.
            const std::uint64_t base = 2 * (static_cast<std::uint64_t>(t) * M + i);
            const std::uint64_t p_master = rng::derive_key(params.seed, rng::Purpose::trial, base);
            const std::uint64_t q_master = rng::derive_key(params.seed, rng::Purpose::trial, base + 1);
            if (detail::reduction_trial(params, kappa, c, estimator, q_master, false)) {
                null_fired = true;
                ++per_sample_fp;
            }
            if (detail::reduction_trial(params, kappa, c, estimator, p_master, i == hidden))
                alt_fired = true;
        }
        if (null_fired) ++null_fires;
        if (alt_fired) ++alt_fires;
    }
    RunRecord rec = detail::rate_record("hidden_sample_detection", params, kappa, c, trials,
                                        estimator, null_fires);
    rec.set_param("M", M);
    const double eps = static_cast<double>(per_sample_fp) / (static_cast<double>(trials) * M);
    rec.set_metric("null_fire_rate", static_cast<double>(null_fires) / trials);
    rec.set_metric("alt_fire_rate", static_cast<double>(alt_fires) / trials);
    rec.set_metric("per_sample_fp", eps);
    rec.set_metric("union_bound", M * eps);
    return rec;
}

}  // namespace synclab
