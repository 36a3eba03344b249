#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jmbell/errors.hpp"
#include "jmbell/hypergraph.hpp"
#include "jmbell/types.hpp"

namespace jmbell {

// ---------------------------------------------------------------------------
// Specker-block coefficients and row matrices.
//
// Both A and B share one row pattern. For 2 <= x <= N-1 (1-based) row x has
// -c_x in column N-x, c_k/(N-k) in column N-k for k = 1..x-1, c_0 in column N
// and zeros elsewhere; row N repeats row N-1 with +c_{N-1} in column 1. The
// recursion c_{k+1}^2 = (1 - 1/(N-k)^2) c_k^2 makes every such row a unit
// vector since the column terms telescope to c_1^2 - c_x^2.

namespace detail {

template <typename Real>
VectorT<Real> specker_recursion(int N, Real c0_squared, Real c1_squared) {
    VectorT<Real> c(N);
    Real prev = c1_squared;
    c(0) = std::sqrt(c0_squared);
    c(1) = std::sqrt(c1_squared);
    for (int k = 1; k + 1 < N; ++k) {
        const Real nk = static_cast<Real>(N - k);
        prev = (Real(1) - Real(1) / (nk * nk)) * prev;
        c(k + 1) = std::sqrt(prev);
    }
    return c;
}

template <typename Real>
MatrixT<Real> specker_rows(int N, const VectorT<Real> &c) {
    if (N < 3)
        throw ShapeError("Specker rows need N >= 3, got " + std::to_string(N));
    if (c.size() != N)
        throw ShapeError("coefficient list has " + std::to_string(c.size()) +
                         " entries, expected " + std::to_string(N));
    MatrixT<Real> m = MatrixT<Real>::Zero(N, N);
    for (int x = 2; x <= N; ++x) {
        const int last = std::min(x, N - 1);
        m(x - 1, N - 1) = c(0);
        for (int k = 1; k < last; ++k)
            m(x - 1, N - k - 1) = c(k) / static_cast<Real>(N - k);
        m(x - 1, N - last - 1) = (x < N) ? -c(last) : c(last);
    }
    return m;
}

} // namespace detail

template <typename Real = double>
VectorT<Real> coefficients_q(int N, Real q0_squared) {
    if (N < 3)
        throw DomainError("coefficients_q needs N >= 3");
    if (!(q0_squared > Real(0) && q0_squared <= Real(1)))
        throw DomainError("q0^2 must lie in (0, 1]");
    return detail::specker_recursion<Real>(N, q0_squared, Real(1) - q0_squared);
}

template <typename Real = double>
VectorT<Real> coefficients_p(int N) {
    if (N < 3)
        throw DomainError("coefficients_p needs N >= 3");
    const Real inv = Real(1) / static_cast<Real>(N);
    return detail::specker_recursion<Real>(N, inv, Real(1) - inv);
}

/// Alice's row matrix. Row 1 is (0, ..., 0, -q_1, +q_0): the relative sign
/// between the last two entries is what makes p(00|1,y) vanish at the
/// cancelling epsilon together with the rows x >= 2.
template <typename Real = double>
MatrixT<Real> matrix_A(int N, const VectorT<Real> &q) {
    MatrixT<Real> m = detail::specker_rows<Real>(N, q);
    m(0, N - 2) = -q(1);
    m(0, N - 1) = q(0);
    return m;
}

/// Bob's row matrix; row 1 is the basis vector e_N.
template <typename Real = double>
MatrixT<Real> matrix_B(int N, const VectorT<Real> &p) {
    MatrixT<Real> m = detail::specker_rows<Real>(N, p);
    m(0, N - 1) = Real(1);
    return m;
}

template <typename Real = double>
Real optimal_epsilon(int N, Real q0_squared) {
    if (N < 3)
        throw DomainError("optimal_epsilon needs N >= 3");
    if (!(q0_squared > Real(0) && q0_squared <= Real(1)))
        throw DomainError("q0^2 must lie in (0, 1]");
    const Real n1 = static_cast<Real>(N - 1);
    const Real eps2 = (Real(1) - q0_squared) / (Real(1) + (n1 * n1 - Real(1)) * q0_squared);
    return std::sqrt(eps2);
}

template <typename Real = double>
Real default_q0_squared(int N) {
    if (N < 3)
        throw DomainError("default_q0_squared needs N >= 3");
    return Real(1) - Real(1) / (Real(2) * static_cast<Real>(N));
}

/// sqrt((1-eps^2)/(N-1)) sum_{k<N} |kk> + eps |NN>, indexed a*N + b.
template <typename Real = double>
KetT<Real> state_vector(int N, Real epsilon) {
    if (N < 2)
        throw DomainError("state_vector needs N >= 2");
    if (!(epsilon >= Real(0) && epsilon <= Real(1)))
        throw DomainError("epsilon must lie in [0, 1]");
    KetT<Real> psi = KetT<Real>::Zero(N * N);
    const Real amp = std::sqrt((Real(1) - epsilon * epsilon) / static_cast<Real>(N - 1));
    for (int k = 0; k + 1 < N; ++k)
        psi(k * N + k) = amp;
    psi(N * N - 1) = epsilon;
    return psi;
}

// ---------------------------------------------------------------------------
// Measurements and blocks.

/// Two-outcome POVM {effect0, identity - effect0}.
struct DichotomicPovm {
    HermitianOperator effect0;
    HermitianOperator effect1;
    bool trivial = false; // effect0 is exactly zero

    static DichotomicPovm from_effect(const HermitianOperator &effect0);
    /// {0, I}: outcome 0 impossible.
    static DichotomicPovm trivial_povm(Eigen::Index dim);

    Eigen::Index dim() const { return effect0.rows(); }
};

struct SpeckerParams {
    int N = 3;
    double q0_squared = 5.0 / 6.0;
    double epsilon = 0.0;

    double eta() const { return 1.0 / static_cast<double>(N - 1); }

    /// q0^2 = 1 - 1/(2N) and the cancelling epsilon, unless overridden.
    static SpeckerParams defaults(int N, std::optional<double> q0_squared = std::nullopt,
                                  std::optional<double> epsilon = std::nullopt);
};

/// Operators and state of one block before placement at global settings.
struct LocalBlock {
    int dim = 0;
    std::vector<DichotomicPovm> alice;
    std::vector<DichotomicPovm> bob;
    Ket state;
};

struct BlockOperators {
    std::vector<DichotomicPovm> alice;
    std::vector<DichotomicPovm> bob;
};

BlockOperators specker_block_operators(const SpeckerParams &params);

LocalBlock specker_block(const SpeckerParams &params);

/// Outcome-0 sign of each observable in the CHSH block, in the order
/// (Alice Z, Alice X, Bob (Z+X)/sqrt2, Bob (Z-X)/sqrt2); effect0 = (I + s O)/2.
/// Chosen by exhaustive search over the 16 labelings (see tests).
inline constexpr int kChshLabeling[4] = {+1, +1, +1, -1};

/// Tsirelson-achieving qubit block with the given outcome labeling.
LocalBlock chsh_block(const int (&labeling)[4]);
LocalBlock chsh_block();

/// Projector onto the normalized (<u| (x) I)|state>, where alice_effect0 = c|u><u|;
/// zero when that vector vanishes. Saturates Tr[rho (E (x) P)] = Tr[rho (E (x) I)].
HermitianOperator steering_effect(const Ket &state, const HermitianOperator &alice_effect0);

/// One Specker block placed at global settings 0..v-1.
///
/// Alice's row k sits at the k-th smallest member. Bob's row 1 sits at
/// global setting 1 and his row k >= 2 at the k-th member; if setting 1 is
/// not a member, Bob's setting s_1 carries the steering projector of Alice's
/// row 1 so that the block's global contribution equals its local value.
struct BlockRealization {
    std::size_t block_id = 0;
    std::vector<std::size_t> members; // ascending, 0-based
    int N = 0;
    int dim = 0;
    SpeckerParams params;             // meaningful for N >= 3
    std::vector<DichotomicPovm> alice_povms;
    std::vector<DichotomicPovm> bob_povms;
    Ket state;
    std::optional<std::size_t> steering_setting;

    std::size_t settings() const { return alice_povms.size(); }
};

BlockRealization assemble_block(const std::vector<std::size_t> &members,
                                const SpeckerParams &params, std::size_t v,
                                std::size_t block_id = 0);

BlockRealization assemble_block(const JmStructure &structure, const MinimalIncompatibleSet &set,
                                const SpeckerParams &params, std::size_t block_id = 0);

} // namespace jmbell
