#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "dualmax/problem.hpp"
#include "dualmax/uncertainty_set.hpp"

namespace dualmax {

/// Gram matrix of observed transitions: the running sum of outer products of
/// the stacked vectors (x, u, x+) in R^(2n+1). This is everything the policy
/// remembers about the past.
class DataMatrix {
public:
    explicit DataMatrix(int n);

    /// Z += v v^T with v = (x, u, xplus); re-symmetrized after each update.
    void update(const Eigen::VectorXd& x, double u, const Eigen::VectorXd& xplus);

    const Eigen::MatrixXd& matrix() const { return Z_; }
    int n() const { return n_; }
    long count() const { return count_; }
    /// Monotone stamp; bumps on every update. Used as a cheap cache key.
    std::uint64_t version() const { return version_; }

    /// u-diagonal entry Z_uu (scalar block).
    double zuu() const { return Z_(n_, n_); }

private:
    Eigen::MatrixXd Z_;
    int n_;
    long count_ = 0;
    std::uint64_t version_;
};

/// Value-returning flavor of DataMatrix::update.
DataMatrix updated(const DataMatrix& Z, const Eigen::VectorXd& x, double u,
                   const Eigen::VectorXd& xplus);

/// z_B = gamma^2 tr([A B -I] Z [A B -I]^T): the gamma^2-weighted misfit of
/// candidate B against the data; zero iff B explains every recorded
/// transition with zero disturbance.
double z_B(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& B);

/// (z_{-B} - z_B) / 2: the sign-discrimination signal.
double z_tilde(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& B);

/// Coefficients of the quadratic form z_B = gamma^2 (c + 2 B.g + zuu |B|^2).
/// c collects all B-independent terms; g = A Z_xu - Z_pu. The even part
/// (z_B + z_{-B})/2 is gamma^2 (c + zuu |B|^2), so its minimum over the
/// admissible set only needs min |B|^2.
struct ZQuadratic {
    double c;
    Eigen::VectorXd g;
    double zuu;
};
ZQuadratic z_quadratic(const ProblemData& pd, const DataMatrix& Z);

/// min over admissible B of the even part of z_B.
double z_bar(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone);

} // namespace dualmax
