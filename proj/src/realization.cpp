#include "jmbell/realization.hpp"

#include <algorithm>

namespace jmbell {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kZeroTol = 1e-12;

HermitianOperator projector(const VectorT<double> &row) {
    const Ket k = row.cast<std::complex<double>>();
    return k * k.adjoint();
}

} // namespace

DichotomicPovm DichotomicPovm::from_effect(const HermitianOperator &effect0) {
    if (effect0.rows() != effect0.cols())
        throw ShapeError("effect must be square");
    DichotomicPovm m;
    m.effect0 = effect0;
    m.effect1 = HermitianOperator::Identity(effect0.rows(), effect0.cols()) - effect0;
    m.trivial = effect0.isZero(0.0);
    return m;
}

DichotomicPovm DichotomicPovm::trivial_povm(Eigen::Index dim) {
    return from_effect(HermitianOperator::Zero(dim, dim));
}

SpeckerParams SpeckerParams::defaults(int N, std::optional<double> q0_squared,
                                      std::optional<double> epsilon) {
    SpeckerParams p;
    p.N = N;
    if (N < 3) {
        p.q0_squared = 0.0;
        p.epsilon = 0.0;
        return p;
    }
    p.q0_squared = q0_squared.value_or(default_q0_squared<double>(N));
    if (!(p.q0_squared > 0.0 && p.q0_squared <= 1.0))
        throw DomainError("q0^2 must lie in (0, 1]");
    p.epsilon = epsilon.value_or(optimal_epsilon<double>(N, p.q0_squared));
    if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0))
        throw DomainError("epsilon must lie in [0, 1]");
    return p;
}

BlockOperators specker_block_operators(const SpeckerParams &params) {
    const int N = params.N;
    if (N < 3)
        throw DomainError("Specker block needs N >= 3");
    const auto A = matrix_A<double>(N, coefficients_q<double>(N, params.q0_squared));
    const auto B = matrix_B<double>(N, coefficients_p<double>(N));
    const double eta = params.eta();

    BlockOperators ops;
    for (int x = 0; x < N; ++x) {
        ops.alice.push_back(DichotomicPovm::from_effect(eta * projector(A.row(x).transpose())));
        ops.bob.push_back(DichotomicPovm::from_effect(projector(B.row(x).transpose())));
    }
    return ops;
}

LocalBlock specker_block(const SpeckerParams &params) {
    auto ops = specker_block_operators(params);
    LocalBlock block;
    block.dim = params.N;
    block.alice = std::move(ops.alice);
    block.bob = std::move(ops.bob);
    block.state = state_vector<double>(params.N, params.epsilon);
    return block;
}

LocalBlock chsh_block(const int (&labeling)[4]) {
    using C = std::complex<double>;
    HermitianOperator Z(2, 2), X(2, 2);
    Z << C(1), C(0), C(0), C(-1);
    X << C(0), C(1), C(1), C(0);
    const HermitianOperator I = HermitianOperator::Identity(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    const HermitianOperator observables[4] = {Z, X, r * (Z + X), r * (Z - X)};

    LocalBlock block;
    block.dim = 2;
    for (int i = 0; i < 4; ++i) {
        auto povm = DichotomicPovm::from_effect(0.5 * (I + double(labeling[i]) * observables[i]));
        (i < 2 ? block.alice : block.bob).push_back(std::move(povm));
    }
    block.state = Ket::Zero(4);
    block.state(0) = r;
    block.state(3) = r;
    return block;
}

LocalBlock chsh_block() { return chsh_block(kChshLabeling); }

HermitianOperator steering_effect(const Ket &state, const HermitianOperator &alice_effect0) {
    const Eigen::Index d = alice_effect0.rows();
    if (state.size() != d * d)
        throw DimensionMismatch("state does not live on C^d (x) C^d for the effect's dimension");
    Eigen::SelfAdjointEigenSolver<HermitianOperator> es(alice_effect0);
    const auto &w = es.eigenvalues();
    const double top = w(d - 1);
    if (!(top > kZeroTol) || (d > 1 && std::abs(w(d - 2)) > kRankTol * std::max(1.0, top)) ||
        w.minCoeff() < -kRankTol)
        throw RankError("steering effect needs a rank-1 positive Alice effect");
    const Ket u = es.eigenvectors().col(d - 1);

    // (<u| (x) I)|psi> = Psi^T conj(u) in the reshaped picture.
    const Ket phi = ket_as_matrix(state, d).transpose() * u.conjugate();
    const double norm = phi.norm();
    if (norm <= kZeroTol)
        return HermitianOperator::Zero(d, d);
    const Ket unit = phi / norm;
    return unit * unit.adjoint();
}

BlockRealization assemble_block(const std::vector<std::size_t> &members_in,
                                const SpeckerParams &params, std::size_t v,
                                std::size_t block_id) {
    std::vector<std::size_t> members = members_in;
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw ShapeError("block members must be distinct");
    if (members.size() < 2)
        throw ShapeError("a block needs at least two members");
    if (members.back() >= v)
        throw UnknownVertex("block member " + std::to_string(members.back() + 1) +
                            " exceeds the " + std::to_string(v) + " settings");

    const int N = static_cast<int>(members.size());
    LocalBlock local;
    SpeckerParams used = params;
    used.N = N;
    if (N == 2) {
        local = chsh_block();
    } else {
        local = specker_block(used);
    }

    BlockRealization b;
    b.block_id = block_id;
    b.members = members;
    b.N = N;
    b.dim = local.dim;
    b.params = used;
    b.state = local.state;
    b.alice_povms.assign(v, DichotomicPovm::trivial_povm(local.dim));
    b.bob_povms.assign(v, DichotomicPovm::trivial_povm(local.dim));

    for (int k = 0; k < N; ++k)
        b.alice_povms[members[k]] = local.alice[k];
    b.bob_povms[0] = local.bob[0];
    for (int k = 1; k < N; ++k)
        b.bob_povms[members[k]] = local.bob[k];
    if (members.front() != 0) {
        b.bob_povms[members.front()] =
            DichotomicPovm::from_effect(steering_effect(local.state, local.alice[0].effect0));
        b.steering_setting = members.front();
    }
    return b;
}

BlockRealization assemble_block(const JmStructure &structure, const MinimalIncompatibleSet &set,
                                const SpeckerParams &params, std::size_t block_id) {
    return assemble_block(set.members, params, structure.vertex_count, block_id);
}

} // namespace jmbell
