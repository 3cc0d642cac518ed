#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dualmax/problem.hpp"
#include "dualmax/rng.hpp"
#include "dualmax/statistics.hpp"
#include "dualmax/uncertainty_set.hpp"

namespace dualmax {

/// A control action as a finite-support distribution. Deterministic actions
/// have a single atom; the randomized branch uses the minimal two-point law
/// matching a prescribed mean and second moment exactly.
struct ActionDistribution {
    struct Atom {
        double value;
        double probability;
    };
    std::vector<Atom> support;
    double mean = 0.0;
    double second_moment = 0.0;

    bool is_deterministic() const { return support.size() == 1; }

    static ActionDistribution deterministic(double u);

    /// Support {+magnitude, -magnitude} with p = (1 + mean/magnitude)/2, which
    /// reproduces the prescribed mean and second moment magnitude^2 exactly.
    /// Requires |mean| <= magnitude.
    static ActionDistribution two_point(double mean, double magnitude);
};

/// Draw from the support with the stated probabilities; deterministic given the stream.
double realize(const ActionDistribution& action, Rng& rng);

enum class Branch { Exploit, Explore };

struct PolicyDecision {
    Branch branch = Branch::Exploit;
    Eigen::VectorXd Bhat;
    /// The scalar gain applied to the current state: ((1-gamma^-2)R + |Bhat|^2)^-1 Bhat^T A x.
    double Khat_x = 0.0;
    ActionDistribution action;
    double ztilde_at_Bhat = 0.0;
};

/// ((1-gamma^-2)R + |B|^2)^-1 B^T A x. The denominator is bounded below by rbar > 0.
double gain_times_x(const ProblemData& pd, const Eigen::VectorXd& B, const Eigen::VectorXd& x);

/// Argmax over the admissible set of the two-term criterion
///   max{ [|Ax|^2 - (|B|^2+rbar)^-1 (B^T Ax)^2] / (1-gamma^-2) - z_B,
///        [|Ax|^2 + (|B|^2+rbar)^-1 (B^T Ax)^2] / (1-gamma^-2) - (z_B+z_{-B})/2 }.
/// Ties are broken so that z_tilde at the result is nonnegative, then toward
/// B^T Ax >= 0, then lexicographically.
Eigen::VectorXd select_Bhat(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                            const Eigen::VectorXd& x);

/// One policy evaluation: pick Bhat, then exploit (deterministic -Khat x) when
/// z_tilde is at least the excitation threshold 2 Khat x Bhat^T A x / (1-gamma^-2),
/// otherwise explore with mean (gamma^-2 - 1) z_tilde / (2 Bhat^T A x) and
/// second moment (Khat x)^2.
PolicyDecision decide(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                      const Eigen::VectorXd& x);

/// Caching front end: repeated queries at an unchanged (x, statistic version)
/// return the stored decision. One slot suffices for the rollout and
/// verification access patterns. Not safe for concurrent use; give each
/// worker its own instance.
class Policy {
public:
    Policy(const ProblemData& pd, const ConeParams& cone) : pd_(&pd), cone_(&cone) {}

    const PolicyDecision& decide(const DataMatrix& Z, const Eigen::VectorXd& x) const;

private:
    const ProblemData* pd_;
    const ConeParams* cone_;
    mutable bool has_memo_ = false;
    mutable std::uint64_t memo_version_ = 0;
    mutable Eigen::VectorXd memo_x_;
    mutable PolicyDecision memo_;
};

} // namespace dualmax
