#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "synclab/model.hpp"
#include "synclab/rng.hpp"

namespace synclab {

struct EigenPair {
    double value = 0.0;
    CVector vector;
    double residual = 0.0;  // ||Mv - value v||_2 at termination
    long iterations = 0;
};

struct OverlapScore {
    double value = 0.0;
};

namespace detail {

struct PowerResult {
    bool converged = false;
    double rayleigh = 0.0;
    CVector vector;
    long iterations = 0;
};

inline CVector random_unit_vector(int n, std::uint64_t start_index) {
    rng::Stream stream(0, rng::Purpose::start_vector, start_index);
    CVector v(n);
    for (int k = 0; k < n; ++k) v(k) = Complex(stream.gaussian(), stream.gaussian());
    v.normalize();
    return v;
}

inline PowerResult power_iterate(const CMatrix& a, CVector v, double tol, long max_iter) {
    PowerResult r;
    double prev = std::numeric_limits<double>::infinity();
    CVector w(v.size());
    for (long it = 1; it <= max_iter; ++it) {
        w.noalias() = a * v;
        // Rayleigh quotient of the current unit iterate, from the same matvec.
        const double rho = v.dot(w).real();
        const double norm = w.norm();
        if (norm == 0.0) {
            // a annihilates v; restart handles this.
            r.vector = std::move(v);
            r.iterations = it;
            return r;
        }
        v = w / norm;
        r.iterations = it;
        // norm - |rho| >= 0 measures misalignment with the dominant eigenspace;
        // it stays large when +/- extremes tie and the iterate only oscillates.
        if (std::abs(rho - prev) <= tol && norm - std::abs(rho) <= tol) {
            r.converged = true;
            r.rayleigh = rho;
            r.vector = std::move(v);
            return r;
        }
        prev = rho;
    }
    r.rayleigh = prev;
    r.vector = std::move(v);
    return r;
}

}  // namespace detail

// Eigenpair of the largest (signed) eigenvalue by power iteration. Plain
// iteration finds the dominant-magnitude eigenvalue; when that converges to a
// negative Rayleigh quotient, a positive shift redirects dominance to the
// largest signed eigenvalue. A stagnating run (near-tied +/- extremes) is
// restarted once with a fresh start vector and then shifted.
inline EigenPair top_eigenpair(const HermitianMatrix& M, double tol = 1e-10,
                               long max_iter = 10000) {
    if (tol <= 0) throw invalid_parameter("top_eigenpair: tol must be > 0");
    if (max_iter < 1) throw invalid_parameter("top_eigenpair: max_iter must be >= 1");
    const CMatrix& a = M.mat();
    const int n = M.dim();

    auto finish = [&](const detail::PowerResult& r, long extra_iters) {
        EigenPair pair;
        pair.vector = r.vector;
        pair.value = (pair.vector.adjoint() * a * pair.vector)(0).real();
        pair.residual = (a * pair.vector - pair.value * pair.vector).norm();
        pair.iterations = r.iterations + extra_iters;
        return pair;
    };
    auto shifted_run = [&](double magnitude, std::uint64_t start_index, long budget) {
        const double sigma = 1.1 * magnitude + tol;
        CMatrix shifted = a;
        shifted.diagonal().array() += sigma;
        return detail::power_iterate(shifted, detail::random_unit_vector(n, start_index), tol,
                                     budget);
    };

    detail::PowerResult plain = detail::power_iterate(a, detail::random_unit_vector(n, 0), tol, max_iter);
    if (plain.converged) {
        if (plain.rayleigh >= 0) return finish(plain, 0);
        detail::PowerResult up = shifted_run(std::abs(plain.rayleigh), 1, max_iter);
        if (up.converged) return finish(up, plain.iterations);
        EigenPair last = finish(up, plain.iterations);
        throw convergence_error("top_eigenpair: shifted iteration did not converge", last.residual);
    }
    detail::PowerResult retry = detail::power_iterate(a, detail::random_unit_vector(n, 1), tol, max_iter);
    if (retry.converged && retry.rayleigh >= 0) return finish(retry, plain.iterations);
    const double magnitude =
        std::max(std::abs(plain.rayleigh), std::abs(retry.converged ? retry.rayleigh : 0.0));
    detail::PowerResult shifted = shifted_run(magnitude, 2, max_iter);
    if (shifted.converged) return finish(shifted, plain.iterations + retry.iterations);
    EigenPair last = finish(shifted, plain.iterations + retry.iterations);
    throw convergence_error("top_eigenpair: power iteration did not converge", last.residual);
}

// Rank-one spectral estimator X = v v* from the chosen channel's top
// eigenvector; ||X||_F = 1.
inline HermitianMatrix pca_estimate(const MultiFreqObservation& obs, int channel,
                                    double tol = 1e-10, long max_iter = 10000) {
    if (channel < 1 || channel > static_cast<int>(obs.channels.size()))
        throw invalid_parameter("pca_estimate: channel must lie in [1, L]");
    EigenPair top = top_eigenpair(obs.channels[static_cast<std::size_t>(channel - 1)], tol, max_iter);
    return HermitianMatrix(top.vector * top.vector.adjoint());
}

// Normalized correlation <X, xx*> / (||X||_F ||xx*||_F); ||xx*||_F = n for a
// phase signal. Invariant under global phase shifts of x and positive
// rescaling of X.
inline OverlapScore overlap_score(const HermitianMatrix& X, const PhaseSignal& x) {
    const double norm = X.frobenius_norm();
    if (norm == 0.0) throw degenerate_estimator("overlap_score: X has zero Frobenius norm");
    const CVector v = x.vector();
    // <X, xx*> = v* X v, real for Hermitian X.
    const double inner = (v.adjoint() * X.mat() * v)(0).real();
    return OverlapScore{inner / (norm * x.n())};
}

// Exhaustive likelihood search over the phase grid {2 pi j / grid}^n with the
// gauge theta_1 = 0, maximizing sum_l Re<Y_l, (lambda/sqrt n) x^(l) x^(l)*>.
inline PhaseSignal brute_force_mle(const MultiFreqObservation& obs, int grid) {
    if (grid < 2) throw invalid_parameter("brute_force_mle: grid must be >= 2");
    const int n = obs.params.n;
    const int L = obs.params.L;
    const double bits = n * std::log2(static_cast<double>(grid));
    if (bits > 24.0 + 1e-9)
        throw invalid_parameter("brute_force_mle: enumeration budget requires n*log2(grid) <= 24");

    const double scale = obs.params.lambda / std::sqrt(static_cast<double>(n));
    std::vector<int> index(static_cast<std::size_t>(n), 0);  // index[0] stays 0 (gauge)
    std::vector<double> best_phases(static_cast<std::size_t>(n), 0.0);
    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<double> phases(static_cast<std::size_t>(n), 0.0);

    while (true) {
        for (int k = 1; k < n; ++k)
            phases[static_cast<std::size_t>(k)] = kTwoPi * index[static_cast<std::size_t>(k)] / grid;
        PhaseSignal x(phases);
        double score = 0.0;
        for (int ell = 1; ell <= L; ++ell) {
            const CVector v = x.lift(ell);
            score += (v.adjoint() * obs.channels[static_cast<std::size_t>(ell - 1)].mat() * v)(0).real();
        }
        score *= (scale > 0.0) ? scale : 1.0;
        if (score > best_score) {
            best_score = score;
            best_phases = phases;
        }
        int k = n - 1;
        while (k >= 1 && ++index[static_cast<std::size_t>(k)] == grid) {
            index[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 1) break;
    }
    return PhaseSignal(best_phases);
}

}  // namespace synclab
