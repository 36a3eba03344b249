#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jmbell/realization.hpp"
#include "jmbell/types.hpp"

namespace jmbell {

/// Outcome-0 statistics over v settings per party. p00(x, y) has Alice's
/// setting as the row and Bob's as the column.
struct CorrelationTable {
    std::size_t v = 0;
    Eigen::VectorXd pA;
    Eigen::VectorXd pB;
    Eigen::MatrixXd p00;

    static CorrelationTable zeros(std::size_t v);
};

struct BellValue {
    double value = 0.0;
    /// Distance above the local bound of 0.
    double margin() const { return value; }
    bool violates() const { return value > 0.0; }
};

/// Direct traces against the block's pure state. Trivial settings give exact zeros.
CorrelationTable block_correlations(const BlockRealization &block, std::size_t v);
CorrelationTable block_correlations(const BlockRealization &block);

/// -pB(1) - sum_{x>=2} pA(x) + sum_x p00(x,1) + sum_{x>=2} p00(x,x) - sum_{x<y} p00(x,y)
BellValue cg_value(const CorrelationTable &table);

/// Closed-form probabilities of the N-Specker block (members 1..N). Entries
/// outside the five closed forms (pA(1), pB(y>=2), p00(x,y) for x>y>=2) come
/// from direct trace. Alice-side probabilities carry the eta of her effects.
CorrelationTable analytic_block_probabilities(int N, double q0_squared, double epsilon);

/// eta * eps^2 (N q0^2 - (N-1)) at the cancelling epsilon.
double analytic_block_value(int N, double q0_squared);

/// eps^2 (N q0^2 - (N-1)): the same closed form without the eta factor.
/// Kept so reports can show how far it sits from the traced value.
double unscaled_block_value(int N, double q0_squared);

/// One table entry that a closed form covers, compared against direct trace.
struct FormulaCheck {
    std::string formula; // e.g. "p00(x,y), y>x>=1"
    std::size_t x = 0;   // 1-based Alice setting (0 when not applicable)
    std::size_t y = 0;   // 1-based Bob setting (0 when not applicable)
    double analytic = 0.0;
    double trace = 0.0;
    double delta() const { return analytic - trace; }
};

/// All covered entries of the N-block, analytic vs. direct trace.
std::vector<FormulaCheck> compare_analytic(int N, double q0_squared, double epsilon);

struct LhvResult {
    double value = 0.0;
    std::uint32_t alice_zero_outcomes = 0; // bit x set: pA(x) = 1
    std::uint32_t bob_zero_outcomes = 0;
};

inline constexpr std::size_t kLhvLimit = 12;

/// Exhaustive maximum of cg_value over the 4^v deterministic local strategies.
LhvResult lhv_max(std::size_t v);

CorrelationTable deterministic_table(std::size_t v, std::uint32_t alice_zero_outcomes,
                                     std::uint32_t bob_zero_outcomes);

/// Multinomial sampling of the four joint outcomes for every setting pair.
/// Marginals are pooled over the partner's settings. Deterministic per seed.
CorrelationTable sample_from_table(const CorrelationTable &exact, std::uint64_t shots,
                                   std::uint64_t seed);

CorrelationTable sample_statistics(const BlockRealization &block, std::uint64_t shots,
                                   std::uint64_t seed);

} // namespace jmbell
