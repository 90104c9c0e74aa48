#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "synclab/errors.hpp"
#include "synclab/hermitian.hpp"

namespace synclab {

using MonomialExponents = std::vector<int>;

namespace detail {

// E[g^k] for g ~ N(0,1): (k-1)!! for even k, 0 for odd k.
inline double gaussian_raw_moment(int k) {
    if (k % 2 != 0) return 0.0;
    double m = 1.0;
    for (int j = 1; j < k; j += 2) m *= j;
    return m;
}

// E[(g + mu)^k] for g ~ N(0,1), by the binomial expansion.
inline double noncentral_gaussian_moment(int k, double mu) {
    double total = 0.0, binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        total += binom * std::pow(mu, k - j) * gaussian_raw_moment(j);
        binom = binom * (k - j) / (j + 1);
    }
    return total;
}

}  // namespace detail

// A small testing problem: an N-dimensional pair of laws (planted P, null Q)
// given through moment oracles. Oracle calls are memoized per problem.
class ToyProblem {
  public:
    using MomentFn = std::function<double(const MonomialExponents&)>;

    ToyProblem(int dim, MomentFn null_fn, MomentFn planted_fn, std::string description)
        : dim_(dim),
          null_fn_(std::move(null_fn)),
          planted_fn_(std::move(planted_fn)),
          description_(std::move(description)) {
        if (dim_ < 1) throw invalid_parameter("ToyProblem: dim must be >= 1");
    }

    int dim() const { return dim_; }
    const std::string& description() const { return description_; }

    double null_moment(const MonomialExponents& e) const { return lookup(null_cache_, null_fn_, e); }
    double planted_moment(const MonomialExponents& e) const {
        return lookup(planted_cache_, planted_fn_, e);
    }

  private:
    double lookup(std::map<MonomialExponents, double>& cache, const MomentFn& fn,
                  const MonomialExponents& e) const {
        if (static_cast<int>(e.size()) != dim_)
            throw invalid_parameter("ToyProblem: exponent vector length must equal dim");
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
        const double v = fn(e);
        cache.emplace(e, v);
        return v;
    }

    int dim_;
    MomentFn null_fn_;
    MomentFn planted_fn_;
    std::string description_;
    mutable std::map<MonomialExponents, double> null_cache_;
    mutable std::map<MonomialExponents, double> planted_cache_;
};

enum class ToyKind { angular_n2_L1, gaussian_mean_shift };

// angular_n2_L1 instantiates the spiked model at n = 2, L = 1 in the four
// standardized real coordinates z = (Y_11, Y_22, sqrt2 Re Y_12, sqrt2 Im Y_12):
// under Q these are iid N(0,1); under P they get means
// (lambda/sqrt2, lambda/sqrt2, lambda cos d, lambda sin d), d = theta_1 - theta_2.
// The planted law depends on the phases only through d, so planted moments are
// a 1-D periodic-trapezoid average over d (exact for these trig polynomials).
inline ToyProblem build_toy_problem(ToyKind kind, double lambda, int D) {
    if (D > 4) throw budget_exceeded("build_toy_problem: moment budget requires D <= 4");
    if (D < 0) throw invalid_parameter("build_toy_problem: D must be >= 0");
    if (kind == ToyKind::gaussian_mean_shift) {
        auto null_fn = [](const MonomialExponents& e) { return detail::gaussian_raw_moment(e[0]); };
        auto planted_fn = [lambda](const MonomialExponents& e) {
            return detail::noncentral_gaussian_moment(e[0], lambda);
        };
        return ToyProblem(1, null_fn, planted_fn,
                          "gaussian_mean_shift(mu=" + std::to_string(lambda) + ")");
    }
    auto null_fn = [](const MonomialExponents& e) {
        double prod = 1.0;
        for (int k : e) prod *= detail::gaussian_raw_moment(k);
        return prod;
    };
    auto planted_fn = [lambda](const MonomialExponents& e) {
        constexpr int kNodes = 64;
        const double a = lambda / std::sqrt(2.0);
        double total = 0.0;
        for (int j = 0; j < kNodes; ++j) {
            const double d = kTwoPi * j / kNodes;
            const double m[4] = {a, a, lambda * std::cos(d), lambda * std::sin(d)};
            double prod = 1.0;
            for (int i = 0; i < 4; ++i) prod *= detail::noncentral_gaussian_moment(e[static_cast<std::size_t>(i)], m[i]);
            total += prod;
        }
        return total / kNodes;
    };
    return ToyProblem(4, null_fn, planted_fn,
                      "angular_n2_L1(lambda=" + std::to_string(lambda) + ")");
}

// Monomials of total degree <= D in `dim` variables, ordered by total degree
// then lexicographically on the exponent vector.
inline std::vector<MonomialExponents> monomials_up_to(int dim, int D) {
    std::vector<MonomialExponents> out;
    MonomialExponents current(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == dim) {
            out.push_back(current);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            current[static_cast<std::size_t>(pos)] = k;
            rec(pos + 1, remaining - k);
        }
        current[static_cast<std::size_t>(pos)] = 0;
    };
    for (int deg = 0; deg <= D; ++deg) {
        std::vector<MonomialExponents> layer;
        std::swap(out, layer);
        rec(0, deg);
        std::vector<MonomialExponents> exact;
        for (auto& m : out) {
            int s = 0;
            for (int k : m) s += k;
            if (s == deg) exact.push_back(m);
        }
        std::sort(exact.begin(), exact.end());
        layer.insert(layer.end(), exact.begin(), exact.end());
        std::swap(out, layer);
    }
    return out;
}

struct GramBasis {
    std::vector<MonomialExponents> monomials;
    // Row alpha holds the monomial coefficients of the basis function f_alpha.
    Eigen::MatrixXd coefficients;
    double gram_condition = 1.0;
    int degree = 0;
};

namespace detail {

inline Eigen::MatrixXd monomial_gram(const ToyProblem& p,
                                     const std::vector<MonomialExponents>& monomials) {
    const int m = static_cast<int>(monomials.size());
    Eigen::MatrixXd G(m, m);
    MonomialExponents sum(static_cast<std::size_t>(p.dim()));
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            for (int i = 0; i < p.dim(); ++i)
                sum[static_cast<std::size_t>(i)] = monomials[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] +
                                                   monomials[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
            G(a, b) = G(b, a) = p.null_moment(sum);
        }
    return G;
}

inline void check_gram_condition(const Eigen::MatrixXd& G, int D, double& cond_out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > 1e12)
        throw conditioning_error("gram matrix condition number exceeds 1e12", D);
    cond_out = hi / lo;
}

}  // namespace detail

// Modified Gram-Schmidt on the monomial list under the Q inner product
// <p, q> = E_Q[p q]; f_0 is the constant 1.
inline GramBasis gram_basis(const ToyProblem& p, int D) {
    GramBasis basis;
    basis.degree = D;
    basis.monomials = monomials_up_to(p.dim(), D);
    const int m = static_cast<int>(basis.monomials.size());
    const Eigen::MatrixXd G = detail::monomial_gram(p, basis.monomials);
    detail::check_gram_condition(G, D, basis.gram_condition);

    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(m, m);
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd v = R.row(i).transpose();
        for (int j = 0; j < i; ++j) {
            const Eigen::VectorXd u = R.row(j).transpose();
            v -= (u.dot(G * v)) * u;
        }
        const double norm2 = v.dot(G * v);
        if (norm2 <= 0.0)
            throw conditioning_error("gram_basis: monomial list numerically dependent", D);
        R.row(i) = v.transpose() / std::sqrt(norm2);
    }
    basis.coefficients = std::move(R);
    return basis;
}

// Planted mean E_P[f_alpha] of one basis function.
inline double basis_planted_mean(const ToyProblem& p, const GramBasis& basis, int alpha) {
    double mean = 0.0;
    for (int j = 0; j < static_cast<int>(basis.monomials.size()); ++j) {
        const double c = basis.coefficients(alpha, j);
        if (c != 0.0) mean += c * p.planted_moment(basis.monomials[static_cast<std::size_t>(j)]);
    }
    return mean;
}

// Adv^2 = sum_alpha E_P[f_alpha]^2 over the orthonormal basis.
inline double advantage_via_basis(const ToyProblem& p, const GramBasis& basis) {
    double total = 0.0;
    for (int a = 0; a < static_cast<int>(basis.monomials.size()); ++a) {
        const double mean = basis_planted_mean(p, basis, a);
        total += mean * mean;
    }
    return total;
}

// Same quantity via the closed-form maximizer of E_P[f]^2 / E_Q[f^2] over the
// monomial coefficient space: Adv^2 = b . a where G a = b, b the planted
// monomial means and G the null Gram matrix.
inline double advantage_via_linear_solve(const ToyProblem& p, int D) {
    const std::vector<MonomialExponents> monomials = monomials_up_to(p.dim(), D);
    const Eigen::MatrixXd G = detail::monomial_gram(p, monomials);
    double cond = 1.0;
    detail::check_gram_condition(G, D, cond);
    Eigen::VectorXd b(static_cast<Eigen::Index>(monomials.size()));
    for (int j = 0; j < static_cast<int>(monomials.size()); ++j)
        b(j) = p.planted_moment(monomials[static_cast<std::size_t>(j)]);
    const Eigen::VectorXd a = G.ldlt().solve(b);
    return b.dot(a);
}

// The M-block hidden-informative-sample composition: Q-bar is the M-fold
// product of Q; P-bar draws one block index uniformly, plants it with P, and
// fills the rest with Q.
inline ToyProblem compose_hidden_sample(const ToyProblem& p, int M) {
    if (M < 2) throw invalid_parameter("compose_hidden_sample: M must be >= 2");
    const int N = p.dim();
    if (M * N > 12)
        throw budget_exceeded("compose_hidden_sample: composed budget requires M*N <= 12");
    // Copy the single-block problem so the composed oracles are self-contained.
    auto base = std::make_shared<ToyProblem>(p);
    auto block = [N](const MonomialExponents& e, int b) {
        return MonomialExponents(e.begin() + b * N, e.begin() + (b + 1) * N);
    };
    auto null_fn = [base, block, M](const MonomialExponents& e) {
        double prod = 1.0;
        for (int b = 0; b < M; ++b) prod *= base->null_moment(block(e, b));
        return prod;
    };
    auto planted_fn = [base, block, M](const MonomialExponents& e) {
        double total = 0.0;
        for (int i = 0; i < M; ++i) {
            double prod = 1.0;
            for (int b = 0; b < M; ++b) {
                const MonomialExponents be = block(e, b);
                prod *= (b == i) ? base->planted_moment(be) : base->null_moment(be);
            }
            total += prod;
        }
        return total / M;
    };
    return ToyProblem(M * N, null_fn, planted_fn,
                      p.description() + " hidden in " + std::to_string(M) + " blocks");
}

// Adv_{<=D}(P-bar || Q-bar)^2 by the basis route over the product space.
inline double hidden_sample_advantage(const ToyProblem& p, int M, int D) {
    if (D > 3) throw budget_exceeded("hidden_sample_advantage: composed budget requires D <= 3");
    const ToyProblem composed = compose_hidden_sample(p, M);
    const GramBasis basis = gram_basis(composed, D);
    return advantage_via_basis(composed, basis);
}

// Adjoin one coordinate that is standard Gaussian and independent of the rest
// under both laws; the advantage must be unchanged.
inline ToyProblem augment_with_external(const ToyProblem& p) {
    auto base = std::make_shared<ToyProblem>(p);
    const int N = p.dim();
    auto split = [N](const MonomialExponents& e) {
        return std::pair<MonomialExponents, int>(MonomialExponents(e.begin(), e.begin() + N),
                                                 e.back());
    };
    auto null_fn = [base, split](const MonomialExponents& e) {
        auto [inner, extra] = split(e);
        return base->null_moment(inner) * detail::gaussian_raw_moment(extra);
    };
    auto planted_fn = [base, split](const MonomialExponents& e) {
        auto [inner, extra] = split(e);
        return base->planted_moment(inner) * detail::gaussian_raw_moment(extra);
    };
    return ToyProblem(N + 1, null_fn, planted_fn, p.description() + " + external coordinate");
}

}  // namespace synclab
