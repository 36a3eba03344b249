#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "jmbell/bell.hpp"
#include "jmbell/hypergraph.hpp"
#include "jmbell/realization.hpp"

namespace jmbell {

struct RealizeConfig {
    std::optional<double> q0_squared; // default 1 - 1/(2N) per block
    std::optional<double> epsilon;    // default: the cancelling epsilon per block
    std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

/// Direct-sum realization: one block per minimal incompatible set, in
/// decomposition order, weighted by r_s = dim_s / total_dim. The global state
/// is kept block-sparse; see materialize() for the explicit operator.
struct StackedRealization {
    JmStructure structure;
    std::vector<BlockRealization> blocks;
    std::vector<double> weights;
    std::size_t total_dim = 0;

    std::size_t settings() const { return structure.vertex_count; }
};

StackedRealization realize(const JmStructure &structure, const RealizeConfig &config = {});

struct BlockContribution {
    std::size_t block_id = 0;
    std::vector<std::size_t> members; // 0-based
    int N = 0;
    int dim = 0;
    double weight = 0.0;
    double q0_squared = 0.0; // 0 for CHSH blocks
    double epsilon = 0.0;
    double eta = 1.0;
    std::optional<std::size_t> steering_setting;
    double local_value = 0.0;        // members relabelled to 1..N
    double global_contribution = 0.0; // at the global settings
    bool operator==(const BlockContribution &) const = default;
};

struct GlobalReport {
    std::vector<BlockContribution> blocks;
    double total_value = 0.0;
    double lhv_bound = 0.0;
    bool violation() const { return total_value > lhv_bound; }
    bool operator==(const GlobalReport &) const = default;
};

/// Weighted sum of per-block global contributions.
GlobalReport global_value(const StackedRealization &stacked);

/// Weighted sum of the per-block tables (r_s p^(s)).
CorrelationTable weighted_table(const StackedRealization &stacked);

/// Direct sums over blocks of each setting's outcome-0 effect, on C^total_dim.
std::vector<HermitianOperator> direct_sum_alice_effects(const StackedRealization &stacked);
std::vector<HermitianOperator> direct_sum_bob_effects(const StackedRealization &stacked);

inline constexpr std::size_t kDefaultMaterializeLimit = 4096;

struct MaterializedRealization {
    std::size_t dim = 0; // D = total_dim
    /// Density operator on C^D (x) C^D, index (i, j) -> i*D + j.
    Eigen::SparseMatrix<std::complex<double>> rho;
    std::vector<HermitianOperator> alice_effects; // direct sums over blocks
    std::vector<HermitianOperator> bob_effects;
    CorrelationTable table;
    BellValue value;
    double rho_min_eigenvalue = 0.0;
    double rho_trace = 0.0;
};

/// Builds the explicit block-diagonal state and direct-sum effects and
/// evaluates everything by full traces. Requires D^2 <= limit.
MaterializedRealization materialize(const StackedRealization &stacked,
                                    std::size_t limit = kDefaultMaterializeLimit);

CorrelationTable sample_statistics(const StackedRealization &stacked, std::uint64_t shots,
                                   std::uint64_t seed);

} // namespace jmbell
