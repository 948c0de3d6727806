#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace ncpi {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Normalized trace tau(a) = tr(a)/N, the tracial state of M_N.
inline Cplx ntrace(const CMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("ntrace: matrix not square");
    return a.trace() / static_cast<double>(a.rows());
}

/// tau-inner product <a,b> = tau(a* b), conjugate-linear in the first slot.
inline Cplx tau_inner(const CMat& a, const CMat& b) {
    return (a.array().conjugate() * b.array()).sum() / static_cast<double>(a.rows());
}

/// L2 norm |a|_2 = tau(a* a)^{1/2} = ||a||_F / sqrt(N).
inline double l2_norm(const CMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("l2_norm: matrix not square");
    return a.norm() / std::sqrt(static_cast<double>(a.rows()));
}

/// Operator norm (largest singular value), via the top eigenvalue of a* a.
inline double operator_norm(const CMat& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
    Eigen::SelfAdjointEigenSolver<CMat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return top > 0.0 ? std::sqrt(top) : 0.0;
}

inline bool is_hermitian(const CMat& a, double tol) {
    return operator_norm(a - a.adjoint()) <= tol * (1.0 + operator_norm(a));
}

/// Kronecker product, dense.
inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace ncpi
