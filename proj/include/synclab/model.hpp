#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synclab/hermitian.hpp"
#include "synclab/rng.hpp"

namespace synclab {

struct ModelParams {
    int n = 1;
    int L = 1;
    double lambda = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw invalid_parameter("ModelParams: n must be >= 1");
        if (L < 1) throw invalid_parameter("ModelParams: L must be >= 1");
        if (lambda < 0) throw invalid_parameter("ModelParams: lambda must be >= 0");
    }
};

enum class Provenance { planted, null_model };

inline const char* to_string(Provenance p) {
    return p == Provenance::planted ? "planted" : "null";
}

// The L observation channels (Y_1, ..., Y_L), all of dimension n.
struct MultiFreqObservation {
    std::vector<HermitianMatrix> channels;
    ModelParams params;
    Provenance provenance = Provenance::null_model;
};

// Observation plus the externally sampled (Z_1, ..., Z_L).
struct JointObservation {
    MultiFreqObservation observation;
    std::vector<HermitianMatrix> external;
};

inline PhaseSignal sample_phases(int n, rng::Stream stream) {
    if (n < 1) throw invalid_parameter("sample_phases: n must be >= 1");
    std::vector<double> phases(static_cast<std::size_t>(n));
    for (double& th : phases) th = stream.uniform(0.0, kTwoPi);
    return PhaseSignal(std::move(phases));
}

// GUE(n): diagonal real N(0,1), off-diagonal complex with independent
// N(0,1/2) real and imaginary parts. Draw order is fixed (row-major upper
// triangle) so samples are reproducible given the stream.
inline HermitianMatrix sample_gue(int n, rng::Stream stream) {
    if (n < 1) throw invalid_parameter("sample_gue: n must be >= 1");
    CMatrix w(n, n);
    for (int j = 0; j < n; ++j) {
        w(j, j) = Complex(stream.gaussian(), 0.0);
        for (int k = j + 1; k < n; ++k) {
            const double re = stream.gaussian_half();
            const double im = stream.gaussian_half();
            w(j, k) = Complex(re, im);
            w(k, j) = Complex(re, -im);
        }
    }
    return HermitianMatrix(std::move(w));
}

inline HermitianMatrix spike_matrix(const PhaseSignal& x, int ell, double lambda) {
    const CVector v = x.lift(ell);
    const double scale = lambda / std::sqrt(static_cast<double>(x.n()));
    return HermitianMatrix(scale * (v * v.adjoint()));
}

inline MultiFreqObservation sample_null(const ModelParams& params, std::uint64_t master_seed) {
    params.validate();
    MultiFreqObservation obs;
    obs.params = params;
    obs.provenance = Provenance::null_model;
    obs.channels.reserve(static_cast<std::size_t>(params.L));
    for (int ell = 1; ell <= params.L; ++ell)
        obs.channels.push_back(sample_gue(
            params.n, rng::Stream(master_seed, rng::Purpose::noise_channel, static_cast<std::uint64_t>(ell))));
    return obs;
}

// Y_l = (lambda/sqrt(n)) x^(l) (x^(l))* + W_l. The noise streams match
// sample_null's, so lambda = 0 reproduces the null draw bit for bit.
inline std::pair<PhaseSignal, MultiFreqObservation> sample_planted(const ModelParams& params,
                                                                   std::uint64_t master_seed) {
    params.validate();
    PhaseSignal x = sample_phases(params.n, rng::Stream(master_seed, rng::Purpose::signal));
    MultiFreqObservation obs;
    obs.params = params;
    obs.provenance = Provenance::planted;
    obs.channels.reserve(static_cast<std::size_t>(params.L));
    for (int ell = 1; ell <= params.L; ++ell) {
        HermitianMatrix w = sample_gue(
            params.n, rng::Stream(master_seed, rng::Purpose::noise_channel, static_cast<std::uint64_t>(ell)));
        if (params.lambda == 0.0) {
            obs.channels.push_back(std::move(w));
        } else {
            obs.channels.push_back(
                HermitianMatrix(spike_matrix(x, ell, params.lambda).mat() + w.mat()));
        }
    }
    return {std::move(x), std::move(obs)};
}

// Append L fresh GUE(n) matrices from streams disjoint from the observation's.
inline JointObservation attach_external(MultiFreqObservation obs, std::uint64_t master_seed) {
    JointObservation joint;
    const int n = obs.params.n;
    const int L = obs.params.L;
    joint.observation = std::move(obs);
    joint.external.reserve(static_cast<std::size_t>(L));
    for (int ell = 1; ell <= L; ++ell)
        joint.external.push_back(sample_gue(
            n, rng::Stream(master_seed, rng::Purpose::external_channel, static_cast<std::uint64_t>(ell))));
    return joint;
}

}  // namespace synclab
