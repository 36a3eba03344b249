#include "jmbell/compat.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace jmbell {

PovmValidation verify_povm(const Povm &povm, double tol) {
    PovmValidation r;
    if (povm.empty()) {
        r.valid = false;
        r.issues.push_back("POVM has no effects");
        return r;
    }
    const Eigen::Index d = povm.front().rows();
    HermitianOperator sum = HermitianOperator::Zero(d, d);
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const auto &e = povm[k];
        if (e.rows() != d || e.cols() != d) {
            r.valid = false;
            r.issues.push_back("effect " + std::to_string(k) + " has the wrong shape");
            continue;
        }
        const double herm = (e - e.adjoint()).cwiseAbs().maxCoeff();
        r.hermiticity_error = std::max(r.hermiticity_error, herm);
        if (herm > tol) {
            r.valid = false;
            r.issues.push_back("effect " + std::to_string(k) + " is not Hermitian");
        }
        const double lo = min_eigenvalue(((e + e.adjoint()) / 2.0).eval());
        r.min_eigenvalue = std::min(r.min_eigenvalue, lo);
        if (lo < -tol) {
            std::ostringstream os;
            os << "effect " << k << " has negative eigenvalue " << lo;
            r.valid = false;
            r.issues.push_back(os.str());
        }
        sum += e;
    }
    r.completeness_error = (sum - HermitianOperator::Identity(d, d)).cwiseAbs().maxCoeff();
    if (r.completeness_error > tol) {
        r.valid = false;
        r.issues.push_back("effects do not sum to the identity");
    }
    return r;
}

std::vector<std::size_t> PovmSet::outcome_counts() const {
    std::vector<std::size_t> c;
    for (const auto &p : povms)
        c.push_back(p.size());
    return c;
}

std::size_t PovmSet::joint_outcomes() const {
    std::size_t n = 1;
    for (const auto &p : povms)
        n *= p.size();
    return n;
}

PovmSet PovmSet::from_dichotomic(const std::vector<DichotomicPovm> &povms) {
    PovmSet s;
    for (const auto &p : povms) {
        if (s.dim == 0)
            s.dim = p.dim();
        else if (s.dim != p.dim())
            throw DimensionMismatch("POVMs act on different dimensions");
        s.povms.push_back({p.effect0, p.effect1});
    }
    return s;
}

std::vector<std::vector<std::size_t>> outcome_tuples(const std::vector<std::size_t> &counts) {
    std::size_t total = 1;
    for (auto c : counts)
        total *= c;
    std::vector<std::vector<std::size_t>> out(total, std::vector<std::size_t>(counts.size()));
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t rest = t;
        for (std::size_t x = 0; x < counts.size(); ++x) {
            out[t][x] = rest % counts[x];
            rest /= counts[x];
        }
    }
    return out;
}

namespace {

struct ConstraintCache {
    std::mutex mutex;
    std::map<std::vector<std::size_t>,
             std::pair<std::shared_ptr<const Eigen::MatrixXd>, std::shared_ptr<const Eigen::MatrixXd>>>
        entries;
};

ConstraintCache &constraint_cache() {
    static ConstraintCache cache;
    return cache;
}

} // namespace

MarginalProjector::MarginalProjector(const PovmSet &targets) : dim_(targets.dim) {
    const auto counts = targets.outcome_counts();
    for (const auto &p : targets.povms)
        for (const auto &e : p) {
            if (e.rows() != dim_ || e.cols() != dim_)
                throw ShapeError("target effect does not match the set dimension");
            targets_.push_back(e);
        }

    auto &cache = constraint_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.entries.find(counts);
    if (it == cache.entries.end()) {
        const auto tuples = outcome_tuples(counts);
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(Eigen::Index(targets_.size()),
                                                  Eigen::Index(tuples.size()));
        Eigen::Index row = 0;
        for (std::size_t x = 0; x < counts.size(); ++x)
            for (std::size_t a = 0; a < counts[x]; ++a, ++row)
                for (std::size_t t = 0; t < tuples.size(); ++t)
                    C(row, Eigen::Index(t)) = tuples[t][x] == a ? 1.0 : 0.0;
        Eigen::MatrixXd pinv = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(C)
                                   .pseudoInverse();
        it = cache.entries
                 .emplace(counts, std::make_pair(std::make_shared<const Eigen::MatrixXd>(C),
                                                 std::make_shared<const Eigen::MatrixXd>(pinv)))
                 .first;
    }
    incidence_ = it->second.first;
    pinv_ = it->second.second;
}

std::vector<HermitianOperator>
MarginalProjector::project(const std::vector<HermitianOperator> &blocks) const {
    const Eigen::Index m = incidence_->cols();
    const Eigen::Index dd = dim_ * dim_;
    if (Eigen::Index(blocks.size()) != m)
        throw ShapeError("expected " + std::to_string(m) + " joint-outcome blocks");

    Eigen::MatrixXcd G(m, dd), T(Eigen::Index(targets_.size()), dd);
    for (Eigen::Index t = 0; t < m; ++t) {
        if (blocks[t].rows() != dim_ || blocks[t].cols() != dim_)
            throw ShapeError("block dimension does not match the targets");
        G.row(t) = blocks[t].reshaped().transpose();
    }
    for (Eigen::Index r = 0; r < T.rows(); ++r)
        T.row(r) = targets_[r].reshaped().transpose();

    const Eigen::MatrixXcd C = incidence_->cast<std::complex<double>>();
    const Eigen::MatrixXcd P = pinv_->cast<std::complex<double>>();
    G -= P * (C * G - T);

    std::vector<HermitianOperator> out(m);
    for (Eigen::Index t = 0; t < m; ++t)
        out[t] = G.row(t).transpose().reshaped(dim_, dim_);
    return out;
}

std::vector<HermitianOperator> project_marginals(const std::vector<HermitianOperator> &blocks,
                                                 const PovmSet &targets) {
    return MarginalProjector(targets).project(blocks);
}

std::string to_string(FeasibilityStatus status) {
    return status == FeasibilityStatus::Compatible ? "Compatible" : "Undetermined";
}

JointPovmCandidate reverify(JointPovmCandidate c, const PovmSet &set) {
    const Eigen::Index d = set.dim;
    double worst_eig = std::numeric_limits<double>::infinity();
    HermitianOperator total = HermitianOperator::Zero(d, d);
    for (const auto &g : c.blocks) {
        worst_eig = std::min(worst_eig, min_eigenvalue(((g + g.adjoint()) / 2.0).eval()));
        total += g;
    }
    c.residual_psd = std::max(0.0, -worst_eig);

    double marg = (total - HermitianOperator::Identity(d, d)).cwiseAbs().maxCoeff();
    for (std::size_t x = 0; x < set.povms.size(); ++x) {
        for (std::size_t a = 0; a < set.povms[x].size(); ++a) {
            HermitianOperator sum = HermitianOperator::Zero(d, d);
            for (std::size_t t = 0; t < c.blocks.size(); ++t)
                if (c.outcomes[t][x] == a)
                    sum += c.blocks[t];
            marg = std::max(marg, (sum - set.povms[x][a]).cwiseAbs().maxCoeff());
        }
    }
    c.residual_marginal = marg;
    return c;
}

FeasibilityReport check_joint_measurability(const PovmSet &set, const FeasibilityOptions &options) {
    if (set.povms.empty())
        throw ShapeError("empty POVM set");
    const std::size_t m = set.joint_outcomes();
    const std::size_t cost = m * std::size_t(set.dim) * std::size_t(set.dim);
    if (cost > options.size_limit)
        throw LimitExceeded(std::to_string(m) + " joint outcomes on C^" + std::to_string(set.dim) +
                            " exceed the size limit " + std::to_string(options.size_limit));

    FeasibilityReport report;
    report.options = options;
    const MarginalProjector affine(set);
    const auto tuples = outcome_tuples(set.outcome_counts());
    const Eigen::Index d = set.dim;

    std::vector<HermitianOperator> X(m, HermitianOperator::Identity(d, d) / double(m));
    std::vector<HermitianOperator> Y(m), P(m, HermitianOperator::Zero(d, d)),
        Q(m, HermitianOperator::Zero(d, d)), tmp(m);

    JointPovmCandidate best;
    best.residual_psd = std::numeric_limits<double>::infinity();
    double last_residual = std::numeric_limits<double>::infinity();
    const std::size_t every = std::max<std::size_t>(1, options.check_every);

    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        for (std::size_t t = 0; t < m; ++t) {
            Y[t] = project_psd(X[t] + P[t]);
            P[t] += X[t] - Y[t];
            tmp[t] = Y[t] + Q[t];
        }
        auto Xn = affine.project(tmp);
        for (std::size_t t = 0; t < m; ++t)
            Q[t] = tmp[t] - Xn[t];
        X = std::move(Xn);

        if (it % every != 0 && it != options.max_iter)
            continue;
        double gap = 0.0;
        for (std::size_t t = 0; t < m; ++t)
            gap += (X[t] - Y[t]).squaredNorm();
        gap = std::sqrt(gap);
        if (gap > last_residual * (1.0 + 1e-9) + 1e-15)
            ++report.residual_increases;
        last_residual = gap;
        report.residual_trace.push_back(gap);

        JointPovmCandidate cand;
        cand.outcomes = tuples;
        cand.blocks = X;
        cand.iterations = it;
        cand = reverify(std::move(cand), set);
        if (cand.residual_psd < best.residual_psd)
            best = cand;
        if (cand.residual_psd <= options.psd_tol && cand.residual_marginal <= options.marginal_tol) {
            report.status = FeasibilityStatus::Compatible;
            report.candidate = std::move(cand);
            return report;
        }
    }
    report.candidate = std::move(best);
    return report;
}

} // namespace jmbell
