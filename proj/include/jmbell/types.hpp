#pragma once

#include <complex>

#include <Eigen/Dense>

namespace jmbell {

template <typename Real>
using MatrixT = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using VectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Dense complex operator on C^d; used for effects, states and joint-POVM blocks.
template <typename Real>
using OperatorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using KetT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using HermitianOperator = OperatorT<double>;
using Ket = KetT<double>;

/// Reshape a bipartite ket on C^d (x) C^d into the d x d coefficient matrix
/// Psi(a, b) = <a b|psi>.
template <typename Real>
OperatorT<Real> ket_as_matrix(const KetT<Real> &psi, Eigen::Index dim) {
    OperatorT<Real> m(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b)
            m(a, b) = psi(a * dim + b);
    return m;
}

/// <psi| A (x) B |psi> for a pure bipartite state, without forming A (x) B.
template <typename Real>
std::complex<Real> product_expectation(const KetT<Real> &psi, const OperatorT<Real> &A,
                                       const OperatorT<Real> &B) {
    const Eigen::Index d = A.rows();
    const OperatorT<Real> m = ket_as_matrix(psi, d);
    // (A (x) B)|psi> reshapes to A * Psi * B^T.
    return (m.adjoint() * A * m * B.transpose()).trace();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived> &m, typename Derived::RealScalar tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived> &m) {
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(m.eval(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace jmbell
