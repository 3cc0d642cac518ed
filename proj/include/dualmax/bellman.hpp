#pragma once

#include <Eigen/Dense>

#include "dualmax/policy.hpp"
#include "dualmax/problem.hpp"
#include "dualmax/statistics.hpp"
#include "dualmax/uncertainty_set.hpp"

namespace dualmax {

/// One-point verification of the value function's dominance condition.
struct BellmanReport {
    double value_hat = 0.0;
    /// max over admissible B of the one-step operator applied to the B-indexed candidate.
    double lhs_exploit_family = 0.0;
    /// Closed-form upper bound of the one-step operator applied to the fallback candidate.
    double lhs_bar = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// min over admissible B of z_B (exact for n = 1, multistart ascent otherwise).
double min_z_B(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone);

/// Explicit upper value: max{ |x|^2 - min_B z_B, tau |x|^2 - z_bar }.
double value_hat(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                 const Eigen::VectorXd& x);

/// Exact expectation over the finite-support action of
///   |x|^2_S + u^2 R + (1-gamma^-2)^-1 |Ax + Bu|^2 - z_B.
double F_u_VB(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& x,
              const ActionDistribution& action, const Eigen::VectorXd& B);

/// Certified upper bound of the one-step operator on the fallback candidate:
///   |x|^2_S + E[u^2] R + |Ax|^2 / (tau^-1 - gamma^-2) - gamma^2 E[u^2] - z_bar.
double F_u_Vbar(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                const Eigen::VectorXd& x, const ActionDistribution& action);

/// Runs the policy at (x, Z) and checks that both one-step values stay below
/// value_hat within tol = tol_scale * (1 + |value_hat|).
BellmanReport check_bellman(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                            const Eigen::VectorXd& x, double tol_scale = 1e-7);

} // namespace dualmax
