#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "synclab/errors.hpp"

namespace synclab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// n phases in [0, 2pi); the hidden signal is x_k = exp(i theta_k).
class PhaseSignal {
  public:
    explicit PhaseSignal(std::vector<double> phases) : phases_(std::move(phases)) {
        if (phases_.empty()) throw invalid_parameter("PhaseSignal: need n >= 1 phases");
        for (double& th : phases_) {
            th = std::fmod(th, kTwoPi);
            if (th < 0) th += kTwoPi;
        }
    }

    int n() const { return static_cast<int>(phases_.size()); }
    double phase(int k) const { return phases_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& phases() const { return phases_; }

    // Entrywise ell-th power of x: (exp(i ell theta_1), ..., exp(i ell theta_n)).
    CVector lift(int ell) const {
        if (ell <= 0) throw invalid_parameter("lift_frequency: ell must be >= 1");
        CVector v(n());
        for (int k = 0; k < n(); ++k) {
            const double a = ell * phases_[static_cast<std::size_t>(k)];
            v(k) = Complex(std::cos(a), std::sin(a));
        }
        return v;
    }

    CVector vector() const { return lift(1); }

  private:
    std::vector<double> phases_;
};

inline CVector lift_frequency(const PhaseSignal& x, int ell) { return x.lift(ell); }

// Dense complex Hermitian matrix, both triangles stored. Hermiticity is
// enforced at construction.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {
        if (m_.rows() < 1 || m_.rows() != m_.cols())
            throw invalid_parameter("HermitianMatrix: need a square matrix with n >= 1");
        const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (dev > kHermitianTol)
            throw invalid_parameter("HermitianMatrix: input is not Hermitian (max deviation " +
                                    std::to_string(dev) + ")");
        // Symmetrize exactly so that later algebra sees an exact Hermitian matrix.
        m_ = ((m_ + m_.adjoint()) * 0.5).eval();
        for (Eigen::Index j = 0; j < m_.rows(); ++j) m_(j, j) = Complex(m_(j, j).real(), 0.0);
    }

    static HermitianMatrix zero(int n) { return HermitianMatrix(CMatrix::Zero(n, n)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& mat() const { return m_; }

    Complex operator()(int j, int k) const { return m_(j, k); }

    double frobenius_norm() const { return m_.norm(); }

    // <A, B> = sum_jk A_jk conj(B_jk); real when both arguments are Hermitian.
    double inner(const HermitianMatrix& other) const {
        return (m_.array() * other.m_.array().conjugate()).sum().real();
    }

    HermitianMatrix scaled(double c) const { return HermitianMatrix(c * m_); }

  private:
    CMatrix m_;
};

}  // namespace synclab
