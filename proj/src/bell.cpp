#include "jmbell/bell.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>

namespace jmbell {

CorrelationTable CorrelationTable::zeros(std::size_t v) {
    CorrelationTable t;
    t.v = v;
    t.pA = Eigen::VectorXd::Zero(v);
    t.pB = Eigen::VectorXd::Zero(v);
    t.p00 = Eigen::MatrixXd::Zero(v, v);
    return t;
}

CorrelationTable block_correlations(const BlockRealization &block, std::size_t v) {
    if (block.alice_povms.size() != v || block.bob_povms.size() != v)
        throw DimensionMismatch("block has " + std::to_string(block.alice_povms.size()) +
                                " settings, table asked for " + std::to_string(v));
    const Eigen::Index d = block.dim;
    if (block.state.size() != d * d)
        throw DimensionMismatch("block state does not match block dimension");
    const HermitianOperator I = HermitianOperator::Identity(d, d);

    CorrelationTable t = CorrelationTable::zeros(v);
    for (std::size_t x = 0; x < v; ++x) {
        const auto &a = block.alice_povms[x];
        if (a.effect0.rows() != d)
            throw DimensionMismatch("Alice effect dimension differs from block dimension");
        if (!a.trivial)
            t.pA(x) = product_expectation(block.state, a.effect0, I).real();
    }
    for (std::size_t y = 0; y < v; ++y) {
        const auto &b = block.bob_povms[y];
        if (b.effect0.rows() != d)
            throw DimensionMismatch("Bob effect dimension differs from block dimension");
        if (!b.trivial)
            t.pB(y) = product_expectation(block.state, I, b.effect0).real();
    }
    for (std::size_t x = 0; x < v; ++x) {
        if (block.alice_povms[x].trivial)
            continue;
        for (std::size_t y = 0; y < v; ++y) {
            if (block.bob_povms[y].trivial)
                continue;
            t.p00(x, y) = product_expectation(block.state, block.alice_povms[x].effect0,
                                              block.bob_povms[y].effect0)
                              .real();
        }
    }
    return t;
}

CorrelationTable block_correlations(const BlockRealization &block) {
    return block_correlations(block, block.settings());
}

BellValue cg_value(const CorrelationTable &t) {
    const auto v = static_cast<Eigen::Index>(t.v);
    if (v == 0)
        return {};
    double value = -t.pB(0);
    for (Eigen::Index x = 1; x < v; ++x)
        value += -t.pA(x) + t.p00(x, x);
    for (Eigen::Index x = 0; x < v; ++x)
        value += t.p00(x, 0);
    for (Eigen::Index x = 0; x < v; ++x)
        for (Eigen::Index y = x + 1; y < v; ++y)
            value -= t.p00(x, y);
    return {value};
}

namespace {

struct ClosedForms {
    double pB1, pA, p00_col1, p00_diag, p00_upper;
};

ClosedForms closed_forms(int N, double q0_squared, double epsilon) {
    const auto q = coefficients_q<double>(N, q0_squared);
    const auto p = coefficients_p<double>(N);
    const double eta = 1.0 / (N - 1);
    const double e2 = epsilon * epsilon;
    const double amp = std::sqrt((1.0 - e2) / (N - 1));
    const double diag = amp * p(1) * q(1) + epsilon * p(0) * q(0);
    const double upper = amp * p(1) * q(1) / (1.0 - N) + epsilon * p(0) * q(0);
    return {e2, eta * ((1.0 - e2) / (N - 1) * (1.0 - q0_squared) + e2 * q0_squared),
            eta * e2 * q0_squared, eta * diag * diag, eta * upper * upper};
}

BlockRealization prefix_block(int N, double q0_squared, double epsilon) {
    SpeckerParams params;
    params.N = N;
    params.q0_squared = q0_squared;
    params.epsilon = epsilon;
    std::vector<std::size_t> members(N);
    for (int k = 0; k < N; ++k)
        members[k] = k;
    return assemble_block(members, params, N);
}

} // namespace

CorrelationTable analytic_block_probabilities(int N, double q0_squared, double epsilon) {
    if (N < 3)
        throw DomainError("analytic block probabilities need N >= 3");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw DomainError("epsilon must lie in [0, 1]");
    const ClosedForms f = closed_forms(N, q0_squared, epsilon);
    CorrelationTable t = block_correlations(prefix_block(N, q0_squared, epsilon));

    t.pB(0) = f.pB1;
    for (int x = 1; x < N; ++x) {
        t.pA(x) = f.pA;
        t.p00(x, x) = f.p00_diag;
    }
    for (int x = 0; x < N; ++x) {
        t.p00(x, 0) = f.p00_col1;
        for (int y = x + 1; y < N; ++y)
            t.p00(x, y) = f.p00_upper;
    }
    return t;
}

double analytic_block_value(int N, double q0_squared) {
    const double e = optimal_epsilon<double>(N, q0_squared);
    return e * e * (N * q0_squared - (N - 1)) / (N - 1);
}

double unscaled_block_value(int N, double q0_squared) {
    const double e = optimal_epsilon<double>(N, q0_squared);
    return e * e * (N * q0_squared - (N - 1));
}

std::vector<FormulaCheck> compare_analytic(int N, double q0_squared, double epsilon) {
    const ClosedForms f = closed_forms(N, q0_squared, epsilon);
    const CorrelationTable t = block_correlations(prefix_block(N, q0_squared, epsilon));
    std::vector<FormulaCheck> out;
    out.push_back({"pB(0|1)", 0, 1, f.pB1, t.pB(0)});
    for (int x = 1; x < N; ++x)
        out.push_back({"pA(0|x), 2<=x<=N", std::size_t(x + 1), 0, f.pA, t.pA(x)});
    for (int x = 0; x < N; ++x)
        out.push_back({"p00(x,1)", std::size_t(x + 1), 1, f.p00_col1, t.p00(x, 0)});
    for (int x = 1; x < N; ++x)
        out.push_back({"p00(x,x), x>=2", std::size_t(x + 1), std::size_t(x + 1), f.p00_diag,
                       t.p00(x, x)});
    for (int x = 0; x < N; ++x)
        for (int y = x + 1; y < N; ++y)
            out.push_back({"p00(x,y), y>x>=1", std::size_t(x + 1), std::size_t(y + 1),
                           f.p00_upper, t.p00(x, y)});
    return out;
}

CorrelationTable deterministic_table(std::size_t v, std::uint32_t alice, std::uint32_t bob) {
    CorrelationTable t = CorrelationTable::zeros(v);
    for (std::size_t x = 0; x < v; ++x) {
        t.pA(x) = (alice >> x) & 1u;
        t.pB(x) = (bob >> x) & 1u;
    }
    t.p00 = t.pA * t.pB.transpose();
    return t;
}

LhvResult lhv_max(std::size_t v) {
    if (v == 0 || v > kLhvLimit)
        throw TooManyVertices("lhv_max supports 1 <= v <= " + std::to_string(kLhvLimit));
    const std::uint32_t count = std::uint32_t{1} << v;
    // For fixed Alice bits the functional is affine in Bob's bits:
    //   value = -sum_{x>=2} a_x + sum_y coef_y b_y
    // with coef_1 = -1 + sum_x a_x and coef_y = a_y - sum_{x<y} a_x (y >= 2).
    // Every (a, b) pair is still evaluated.
    LhvResult best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<int> coef(v);
    for (std::uint32_t a = 0; a < count; ++a) {
        const int base = -std::popcount(a & ~std::uint32_t{1});
        coef[0] = -1 + std::popcount(a);
        for (std::size_t y = 1; y < v; ++y) {
            const std::uint32_t below = a & ((std::uint32_t{1} << y) - 1);
            coef[y] = int((a >> y) & 1u) - std::popcount(below);
        }
        for (std::uint32_t b = 0; b < count; ++b) {
            int value = base;
            for (std::uint32_t rest = b; rest; rest &= rest - 1)
                value += coef[std::countr_zero(rest)];
            if (value > best.value) {
                best.value = value;
                best.alice_zero_outcomes = a;
                best.bob_zero_outcomes = b;
            }
        }
    }
    return best;
}

CorrelationTable sample_from_table(const CorrelationTable &exact, std::uint64_t shots,
                                   std::uint64_t seed) {
    const std::size_t v = exact.v;
    CorrelationTable t = CorrelationTable::zeros(v);
    if (shots == 0)
        return t;
    Eigen::VectorXd a_zero = Eigen::VectorXd::Zero(v);
    Eigen::VectorXd b_zero = Eigen::VectorXd::Zero(v);
    const auto clamp01 = [](double p) { return std::clamp(p, 0.0, 1.0); };

    for (std::size_t x = 0; x < v; ++x) {
        for (std::size_t y = 0; y < v; ++y) {
            std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(x),
                              std::uint32_t(y)};
            std::mt19937_64 rng(seq);
            const double p00 = clamp01(exact.p00(x, y));
            const double p01 = clamp01(exact.pA(x) - exact.p00(x, y));
            const double p10 = clamp01(exact.pB(y) - exact.p00(x, y));
            // Chain of conditional binomials draws one multinomial sample.
            std::uint64_t left = shots;
            double mass = 1.0;
            std::uint64_t counts[3] = {0, 0, 0};
            const double probs[3] = {p00, p01, p10};
            for (int k = 0; k < 3 && left > 0; ++k) {
                const double cond = mass > 0.0 ? std::clamp(probs[k] / mass, 0.0, 1.0) : 0.0;
                std::binomial_distribution<std::uint64_t> draw(left, cond);
                counts[k] = draw(rng);
                left -= counts[k];
                mass -= probs[k];
            }
            const double n = double(shots);
            t.p00(x, y) = counts[0] / n;
            a_zero(x) += double(counts[0] + counts[1]);
            b_zero(y) += double(counts[0] + counts[2]);
        }
    }
    t.pA = a_zero / (double(shots) * double(v));
    t.pB = b_zero / (double(shots) * double(v));
    return t;
}

CorrelationTable sample_statistics(const BlockRealization &block, std::uint64_t shots,
                                   std::uint64_t seed) {
    return sample_from_table(block_correlations(block), shots, seed);
}

} // namespace jmbell
