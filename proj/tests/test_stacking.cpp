#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "jmbell/compat.hpp"
#include "jmbell/errors.hpp"
#include "jmbell/stacking.hpp"
#include "oracles.hpp"

using namespace jmbell;
using doctest::Approx;

namespace {

JmStructure specker3() { return JmStructure::with_vertices(3, {{0, 1}, {1, 2}, {0, 2}}); }

JmStructure four_vertex() {
    return JmStructure::with_vertices(4, {{0, 1}, {1, 2}, {0, 2}, {3}});
}

const double kChshValue = (std::sqrt(2.0) - 1.0) / 2.0;

double max_table_delta(const CorrelationTable &a, const CorrelationTable &b) {
    return std::max({(a.pA - b.pA).cwiseAbs().maxCoeff(), (a.pB - b.pB).cwiseAbs().maxCoeff(),
                     (a.p00 - b.p00).cwiseAbs().maxCoeff()});
}

} // namespace

TEST_CASE("realize: blocks, weights and dimensions") {
    const auto s3 = realize(specker3());
    REQUIRE(s3.blocks.size() == 1);
    CHECK(s3.total_dim == 3);
    CHECK(s3.weights == std::vector<double>{1.0});

    const auto s4 = realize(four_vertex());
    REQUIRE(s4.blocks.size() == 4);
    CHECK(s4.total_dim == 9);
    const std::vector<double> w{2.0 / 9, 2.0 / 9, 2.0 / 9, 3.0 / 9};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s4.weights[i] == Approx(w[i]).epsilon(1e-15));
        CHECK(s4.blocks[i].block_id == i);
    }
    CHECK(s4.blocks[3].members == std::vector<std::size_t>{0, 1, 2});

    CHECK_THROWS_AS(realize(JmStructure::with_vertices(3, {{0, 1, 2}})), TrivialStructure);
    CHECK_THROWS_AS(realize(JmStructure::with_vertices(2, {{0, 1}, {0}})), InvalidStructure);
    CHECK_THROWS_AS(realize(JmStructure::with_vertices(17, {})), TooManyVertices);
}

TEST_CASE("realize honours parameter overrides") {
    RealizeConfig cfg;
    cfg.q0_squared = 0.9;
    const auto s = realize(specker3(), cfg);
    CHECK(s.blocks[0].params.q0_squared == 0.9);
    CHECK(s.blocks[0].params.epsilon == Approx(optimal_epsilon<double>(3, 0.9)));
    cfg.epsilon = 0.3;
    CHECK(realize(specker3(), cfg).blocks[0].params.epsilon == 0.3);
}

TEST_CASE("global_value") {
    const auto r3 = global_value(realize(specker3()));
    CHECK(r3.total_value == Approx(1.0 / 84.0).epsilon(1e-12));
    CHECK(r3.total_value == Approx(analytic_block_value(3, 5.0 / 6.0)).epsilon(1e-12));
    CHECK(r3.lhv_bound == 0.0);
    CHECK(r3.violation());
    CHECK(r3.blocks[0].eta == 0.5);

    const auto r2 = global_value(realize(JmStructure::with_vertices(2, {{0}, {1}})));
    CHECK(r2.total_value == Approx(kChshValue).epsilon(1e-12));
    CHECK(r2.blocks[0].q0_squared == 0.0);

    const auto r4 = global_value(realize(four_vertex()));
    const double expected = (1.0 / 3.0) * (1.0 / 84.0) + (2.0 / 9.0) * 3.0 * kChshValue;
    CHECK(r4.total_value == Approx(expected).epsilon(1e-12));
    for (const auto &b : r4.blocks) {
        CHECK(b.global_contribution == Approx(b.local_value).epsilon(1e-9));
        CHECK(b.local_value > 0.0);
    }
    // {2,4} and {3,4} miss setting 1 and carry a steering projector
    CHECK_FALSE(r4.blocks[0].steering_setting.has_value());
    CHECK(r4.blocks[1].steering_setting == std::optional<std::size_t>{1});
    CHECK(r4.blocks[2].steering_setting == std::optional<std::size_t>{2});
}

TEST_CASE("materialize matches the weighted sum") {
    for (const auto &j : {specker3(), four_vertex(), JmStructure::with_vertices(2, {{0}, {1}})}) {
        const auto s = realize(j);
        const auto m = materialize(s);
        CHECK(m.dim == s.total_dim);
        CHECK(max_table_delta(m.table, weighted_table(s)) < 1e-9);
        CHECK(m.value.value == Approx(global_value(s).total_value).epsilon(1e-9));
        CHECK(m.rho_trace == Approx(1.0).epsilon(1e-12));
        CHECK(m.rho_min_eigenvalue > -1e-12);
        for (const auto &E : m.alice_effects)
            CHECK(verify_povm({E, HermitianOperator::Identity(m.dim, m.dim) - E}).valid);
        for (const auto &E : m.bob_effects)
            CHECK(verify_povm({E, HermitianOperator::Identity(m.dim, m.dim) - E}).valid);
    }
}

TEST_CASE("materialize: single block is the pure block state") {
    const auto s = realize(specker3());
    const auto m = materialize(s);
    const HermitianOperator expected = s.blocks[0].state * s.blocks[0].state.adjoint();
    const HermitianOperator rho = HermitianOperator(m.rho);
    CHECK((rho - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("materialize: support lies on the diagonal blocks") {
    const auto s = realize(four_vertex());
    const auto m = materialize(s);
    // block index of each basis vector of C^D
    std::vector<int> owner;
    for (std::size_t b = 0; b < s.blocks.size(); ++b)
        owner.insert(owner.end(), std::size_t(s.blocks[b].dim), int(b));
    const auto D = Eigen::Index(m.dim);
    for (int k = 0; k < m.rho.outerSize(); ++k)
        for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(m.rho, k); it; ++it) {
            if (std::abs(it.value()) == 0.0)
                continue;
            const auto r = it.row(), c = it.col();
            const int b = owner[r / D];
            CHECK(owner[r % D] == b);
            CHECK(owner[c / D] == b);
            CHECK(owner[c % D] == b);
        }
    CHECK(Eigen::Index(owner.size()) == D);
}

TEST_CASE("materialize limit") {
    const auto s = realize(four_vertex());
    CHECK_THROWS_AS(materialize(s, 80), MaterializeLimitExceeded);
    CHECK_NOTHROW(materialize(s, 81));
}

TEST_CASE("random structures: weights, positivity and the two evaluation paths") {
    std::mt19937 rng(77);
    int tested = 0;
    while (tested < 40) {
        const auto j = testing::random_structure(rng, 2 + std::size_t(rng() % 5));
        if (!is_nontrivial(j))
            continue;
        ++tested;
        const auto s = realize(j);
        CHECK(std::accumulate(s.weights.begin(), s.weights.end(), 0.0) ==
              Approx(1.0).epsilon(1e-12));
        const auto g = global_value(s);
        CHECK(g.total_value > 0.0);
        if (s.total_dim * s.total_dim <= kDefaultMaterializeLimit) {
            const auto m = materialize(s);
            CHECK(std::abs(m.value.value - g.total_value) < 1e-9);
            CHECK(max_table_delta(m.table, weighted_table(s)) < 1e-9);
        }
    }
}

TEST_CASE("stacked sampling") {
    const auto s = realize(four_vertex());
    const auto a = sample_statistics(s, 2000, 3);
    const auto b = sample_statistics(s, 2000, 3);
    CHECK(a.p00 == b.p00);
    const auto big = sample_statistics(s, 400000, 11);
    CHECK(max_table_delta(big, weighted_table(s)) < 5e-3);
}
