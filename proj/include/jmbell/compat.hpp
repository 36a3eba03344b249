#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "jmbell/realization.hpp"
#include "jmbell/types.hpp"

namespace jmbell {

using Povm = std::vector<HermitianOperator>;

struct PovmValidation {
    bool valid = true;
    double min_eigenvalue = 0.0;     // over all effects
    double completeness_error = 0.0; // max |sum of effects - I|
    double hermiticity_error = 0.0;
    std::vector<std::string> issues; // one per offending effect
};

PovmValidation verify_povm(const Povm &povm, double tol = 1e-12);

/// A set of POVMs on a common C^dim.
struct PovmSet {
    std::vector<Povm> povms;
    Eigen::Index dim = 0;

    std::vector<std::size_t> outcome_counts() const;
    /// Number of joint outcomes: product of the outcome counts.
    std::size_t joint_outcomes() const;

    static PovmSet from_dichotomic(const std::vector<DichotomicPovm> &povms);
};

/// Frobenius-nearest PSD operator: eigenvalues clipped at zero.
template <typename Derived>
typename Derived::PlainObject project_psd(const Eigen::MatrixBase<Derived> &h) {
    using Plain = typename Derived::PlainObject;
    const Plain herm = (h + h.adjoint()) / typename Derived::RealScalar(2);
    Eigen::SelfAdjointEigenSolver<Plain> es(herm);
    const auto clipped = es.eigenvalues().cwiseMax(typename Derived::RealScalar(0));
    return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

/// Joint-outcome tuples in mixed-radix order, first POVM fastest.
std::vector<std::vector<std::size_t>> outcome_tuples(const std::vector<std::size_t> &counts);

/// Orthogonal projection onto {G : every coarse-graining equals its target}.
///
/// The coarse-graining map acts identically on each matrix entry, so the
/// projection is g - C^+ (C g - t) entrywise, where C is the incidence matrix
/// between (POVM, outcome) rows and joint outcomes. C^+ only depends on the
/// outcome counts and is cached.
class MarginalProjector {
  public:
    explicit MarginalProjector(const PovmSet &targets);

    std::vector<HermitianOperator> project(const std::vector<HermitianOperator> &blocks) const;

    const Eigen::MatrixXd &incidence() const { return *incidence_; }

  private:
    std::shared_ptr<const Eigen::MatrixXd> incidence_;
    std::shared_ptr<const Eigen::MatrixXd> pinv_;
    std::vector<HermitianOperator> targets_; // row order of the incidence matrix
    Eigen::Index dim_ = 0;
};

std::vector<HermitianOperator> project_marginals(const std::vector<HermitianOperator> &blocks,
                                                 const PovmSet &targets);

struct FeasibilityOptions {
    double psd_tol = 1e-7;
    double marginal_tol = 1e-8;
    std::size_t max_iter = 200000;
    std::size_t check_every = 50;
    /// joint outcomes * dim^2 must not exceed this.
    std::size_t size_limit = 1024;
};

struct JointPovmCandidate {
    std::vector<std::vector<std::size_t>> outcomes; // tuple per block
    std::vector<HermitianOperator> blocks;
    double residual_psd = 0.0;      // max(0, -min eigenvalue)
    double residual_marginal = 0.0; // max coarse-graining deviation, incl. completeness
    std::size_t iterations = 0;
};

/// Independent check of a candidate: sums blocks directly per outcome.
JointPovmCandidate reverify(JointPovmCandidate candidate, const PovmSet &set);

enum class FeasibilityStatus { Compatible, Undetermined };

std::string to_string(FeasibilityStatus status);

struct FeasibilityReport {
    FeasibilityStatus status = FeasibilityStatus::Undetermined;
    JointPovmCandidate candidate; // the found G, or the best iterate
    FeasibilityOptions options;
    std::vector<double> residual_trace; // ||X - Y||_F at every check
    std::size_t residual_increases = 0;

    bool compatible() const { return status == FeasibilityStatus::Compatible; }
};

/// Dykstra alternating projections between the PSD cone (per block) and the
/// marginal subspace, from G = I/|O|. Only ever certifies compatibility;
/// failure to converge is reported as Undetermined.
FeasibilityReport check_joint_measurability(const PovmSet &set,
                                            const FeasibilityOptions &options = {});

} // namespace jmbell
