#pragma once

#include <Eigen/Dense>

#include "dualmax/errors.hpp"

namespace dualmax {

/// A single-input linear-quadratic game instance with unknown input vector.
///
/// Dynamics are x+ = A x + B u + w with known square A and an unknown column
/// B constrained to 1 <= |B| <= beta. Stage cost is |x|^2_S + R u^2 and gamma
/// is the target closed-loop l2-gain level. Two derived constants are cached:
///
///   tau  = 1 + 2 ||A||^2 / (1 - gamma^-2)
///   rbar = (1 - gamma^-2) R
///
/// Immutable after construction; safe to share across threads.
class ProblemData {
public:
    ProblemData(Eigen::MatrixXd A, Eigen::MatrixXd S, double R, double beta, double gamma);

    int n() const { return static_cast<int>(A_.rows()); }
    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::MatrixXd& S() const { return S_; }
    double R() const { return R_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

    double gamma_sq() const { return gamma_ * gamma_; }
    /// 1 - gamma^-2, the discount-like factor appearing in all closed forms.
    double one_minus_gamma_inv_sq() const { return one_minus_gis_; }
    double a_norm() const { return a_norm_; }

    double tau() const { return tau_; }
    double rbar() const { return rbar_; }

    /// Smallest eigenvalue of S (negative values were already rejected up to tolerance).
    double s_min_eig() const { return s_min_eig_; }

    /// Admissibility of the gain level:
    ///   gamma^2 >= tau * max{1 + 2R + beta^2, ||S^-1||}.
    /// Singular S makes ||S^-1|| unbounded, so the test fails.
    bool gamma_admissible() const { return admissible_; }

    /// Right-hand side of the admissibility test (+inf when S is singular).
    double admissibility_threshold() const { return threshold_; }

private:
    Eigen::MatrixXd A_;
    Eigen::MatrixXd S_;
    double R_;
    double beta_;
    double gamma_;
    double a_norm_;
    double one_minus_gis_;
    double tau_;
    double rbar_;
    double s_min_eig_;
    double threshold_;
    bool admissible_;
};

/// Spectral norm via symmetric eigendecomposition of M^T M.
double spectral_norm(const Eigen::MatrixXd& M);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& M);

/// True iff the gain level of `pd` passes the admissibility test.
bool validate_gamma(const ProblemData& pd);

/// tau = 1 + 2 ||A||^2 / (1 - gamma^-2); always >= 1.
double tau(const ProblemData& pd);

} // namespace dualmax
