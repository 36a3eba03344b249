#include "jmbell/stacking.hpp"

#include <numeric>

namespace jmbell {

StackedRealization realize(const JmStructure &structure, const RealizeConfig &config) {
    require_valid(structure);
    const auto sets = minimal_incompatible_sets(structure, config.enumeration_limit);
    if (sets.empty())
        throw TrivialStructure("structure has no incompatible set of vertices");

    StackedRealization out;
    out.structure = structure;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const int N = static_cast<int>(sets[s].size());
        const auto params = SpeckerParams::defaults(N, config.q0_squared, config.epsilon);
        out.blocks.push_back(assemble_block(structure, sets[s], params, s));
        out.total_dim += static_cast<std::size_t>(out.blocks.back().dim);
    }
    for (const auto &b : out.blocks)
        out.weights.push_back(double(b.dim) / double(out.total_dim));
    return out;
}

GlobalReport global_value(const StackedRealization &stacked) {
    GlobalReport report;
    for (std::size_t s = 0; s < stacked.blocks.size(); ++s) {
        const auto &b = stacked.blocks[s];
        BlockContribution c;
        c.block_id = b.block_id;
        c.members = b.members;
        c.N = b.N;
        c.dim = b.dim;
        c.weight = stacked.weights[s];
        if (b.N >= 3) {
            c.q0_squared = b.params.q0_squared;
            c.epsilon = b.params.epsilon;
            c.eta = b.params.eta();
        }
        c.steering_setting = b.steering_setting;

        std::vector<std::size_t> local_members(b.N);
        std::iota(local_members.begin(), local_members.end(), std::size_t{0});
        const auto local = assemble_block(local_members, b.params, std::size_t(b.N));
        c.local_value = cg_value(block_correlations(local)).value;
        c.global_contribution = cg_value(block_correlations(b)).value;

        report.total_value += c.weight * c.global_contribution;
        report.blocks.push_back(std::move(c));
    }
    return report;
}

CorrelationTable weighted_table(const StackedRealization &stacked) {
    CorrelationTable t = CorrelationTable::zeros(stacked.settings());
    for (std::size_t s = 0; s < stacked.blocks.size(); ++s) {
        const auto bt = block_correlations(stacked.blocks[s], stacked.settings());
        const double r = stacked.weights[s];
        t.pA += r * bt.pA;
        t.pB += r * bt.pB;
        t.p00 += r * bt.p00;
    }
    return t;
}

namespace {

std::vector<HermitianOperator>
direct_sum(const StackedRealization &stacked,
           const std::vector<DichotomicPovm> BlockRealization::*side) {
    const std::size_t D = stacked.total_dim;
    std::vector<HermitianOperator> out(stacked.settings(), HermitianOperator::Zero(D, D));
    Eigen::Index offset = 0;
    for (const auto &b : stacked.blocks) {
        for (std::size_t x = 0; x < out.size(); ++x)
            out[x].block(offset, offset, b.dim, b.dim) = (b.*side)[x].effect0;
        offset += b.dim;
    }
    return out;
}

} // namespace

std::vector<HermitianOperator> direct_sum_alice_effects(const StackedRealization &stacked) {
    return direct_sum(stacked, &BlockRealization::alice_povms);
}

std::vector<HermitianOperator> direct_sum_bob_effects(const StackedRealization &stacked) {
    return direct_sum(stacked, &BlockRealization::bob_povms);
}

namespace {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

// Tr[rho (A (x) B)] = sum_{r,c} rho(r,c) (A (x) B)(c,r),
// with r = i*D + k, c = j*D + l and (A (x) B)(c,r) = A(j,i) B(l,k).
double product_trace(const SparseOp &rho, std::size_t D, const HermitianOperator &A,
                     const HermitianOperator &B) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index col = 0; col < rho.outerSize(); ++col) {
        const Eigen::Index j = col / Eigen::Index(D), l = col % Eigen::Index(D);
        for (SparseOp::InnerIterator it(rho, col); it; ++it) {
            const Eigen::Index i = it.row() / Eigen::Index(D), k = it.row() % Eigen::Index(D);
            acc += it.value() * A(j, i) * B(l, k);
        }
    }
    return acc.real();
}

void check_effect(const HermitianOperator &e, const char *who, std::size_t setting) {
    const auto id = HermitianOperator::Identity(e.rows(), e.cols());
    if (min_eigenvalue(e) < -1e-12 || min_eigenvalue((id - e).eval()) < -1e-12)
        throw NumericalFailure(std::string(who) + " direct-sum effect at setting " +
                               std::to_string(setting + 1) + " is not a valid POVM element");
}

} // namespace

MaterializedRealization materialize(const StackedRealization &stacked, std::size_t limit) {
    const std::size_t D = stacked.total_dim;
    if (D * D > limit)
        throw MaterializeLimitExceeded("materializing needs " + std::to_string(D * D) +
                                       " entries per side, limit is " + std::to_string(limit));
    const std::size_t v = stacked.settings();
    const auto DD = Eigen::Index(D * D);

    MaterializedRealization m;
    m.dim = D;
    m.alice_effects = direct_sum_alice_effects(stacked);
    m.bob_effects = direct_sum_bob_effects(stacked);

    std::vector<Eigen::Triplet<std::complex<double>>> triplets;
    std::vector<Eigen::Index> support;
    std::vector<char> in_support(DD, 0);
    Eigen::Index offset = 0;
    for (std::size_t s = 0; s < stacked.blocks.size(); ++s) {
        const auto &b = stacked.blocks[s];
        const Eigen::Index d = b.dim;
        const double r = stacked.weights[s];
        const auto global = [&](Eigen::Index local) {
            return (offset + local / d) * Eigen::Index(D) + offset + local % d;
        };
        for (Eigen::Index p = 0; p < d * d; ++p) {
            support.push_back(global(p));
            in_support[global(p)] = 1;
            for (Eigen::Index q = 0; q < d * d; ++q) {
                const auto val = r * b.state(p) * std::conj(b.state(q));
                if (val != std::complex<double>(0.0))
                    triplets.emplace_back(global(p), global(q), val);
            }
        }
        offset += d;
    }
    m.rho.resize(DD, DD);
    m.rho.setFromTriplets(triplets.begin(), triplets.end());
    m.rho.makeCompressed();

    // PSD: nothing outside the block-diagonal support, PSD on it.
    for (Eigen::Index col = 0; col < m.rho.outerSize(); ++col)
        for (SparseOp::InnerIterator it(m.rho, col); it; ++it)
            if (!in_support[it.row()] || !in_support[col])
                throw NumericalFailure("materialized state has weight off the block support");
    std::vector<Eigen::Index> position(DD, -1);
    for (std::size_t a = 0; a < support.size(); ++a)
        position[support[a]] = Eigen::Index(a);
    HermitianOperator restricted = HermitianOperator::Zero(support.size(), support.size());
    m.rho_trace = 0.0;
    for (Eigen::Index col = 0; col < m.rho.outerSize(); ++col)
        for (SparseOp::InnerIterator it(m.rho, col); it; ++it) {
            restricted(position[it.row()], position[col]) = it.value();
            if (it.row() == col)
                m.rho_trace += it.value().real();
        }
    m.rho_min_eigenvalue = min_eigenvalue(restricted);
    if (m.rho_min_eigenvalue < -1e-12 || std::abs(m.rho_trace - 1.0) > 1e-12)
        throw NumericalFailure("materialized state is not a density operator");

    for (std::size_t x = 0; x < v; ++x) {
        check_effect(m.alice_effects[x], "Alice", x);
        check_effect(m.bob_effects[x], "Bob", x);
    }

    const HermitianOperator I = HermitianOperator::Identity(D, D);
    m.table = CorrelationTable::zeros(v);
    for (std::size_t x = 0; x < v; ++x) {
        m.table.pA(x) = product_trace(m.rho, D, m.alice_effects[x], I);
        m.table.pB(x) = product_trace(m.rho, D, I, m.bob_effects[x]);
    }
    for (std::size_t x = 0; x < v; ++x)
        for (std::size_t y = 0; y < v; ++y)
            m.table.p00(x, y) = product_trace(m.rho, D, m.alice_effects[x], m.bob_effects[y]);
    m.value = cg_value(m.table);
    return m;
}

CorrelationTable sample_statistics(const StackedRealization &stacked, std::uint64_t shots,
                                   std::uint64_t seed) {
    return sample_from_table(weighted_table(stacked), shots, seed);
}

} // namespace jmbell
