#include "dualmax/problem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace dualmax {

double spectral_norm(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.transpose() * M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("spectral_norm: eigensolver failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

ProblemData::ProblemData(Eigen::MatrixXd A, Eigen::MatrixXd S, double R, double beta, double gamma)
    : A_(std::move(A)), S_(std::move(S)), R_(R), beta_(beta), gamma_(gamma) {
    if (A_.rows() == 0 || A_.rows() != A_.cols())
        throw InvalidInstanceError("A must be square and non-empty");
    if (S_.rows() != A_.rows() || S_.cols() != A_.cols())
        throw InvalidInstanceError("S must match the dimension of A");
    const double s_scale = spectral_norm(S_);
    if ((S_ - S_.transpose()).norm() > 1e-12 * std::max(1.0, s_scale))
        throw InvalidInstanceError("S must be symmetric");
    S_ = 0.5 * (S_ + S_.transpose());
    s_min_eig_ = min_eigenvalue(S_);
    if (s_min_eig_ < -1e-12 * std::max(1.0, s_scale))
        throw InvalidInstanceError("S must be positive semidefinite");
    if (!(R_ > 0.0)) throw InvalidInstanceError("R must be positive");
    if (!(beta_ >= 1.0)) throw InvalidInstanceError("beta must be >= 1");
    if (!(gamma_ > 1.0)) throw InvalidInstanceError("gamma must be > 1");

    a_norm_ = spectral_norm(A_);
    one_minus_gis_ = 1.0 - 1.0 / (gamma_ * gamma_);
    tau_ = 1.0 + 2.0 * a_norm_ * a_norm_ / one_minus_gis_;
    rbar_ = one_minus_gis_ * R_;

    const double cost_term = 1.0 + 2.0 * R_ + beta_ * beta_;
    const double s_inv_norm =
        s_min_eig_ > 0.0 ? 1.0 / s_min_eig_ : std::numeric_limits<double>::infinity();
    threshold_ = tau_ * std::max(cost_term, s_inv_norm);
    admissible_ = gamma_ * gamma_ >= threshold_;
}

bool validate_gamma(const ProblemData& pd) { return pd.gamma_admissible(); }

double tau(const ProblemData& pd) { return pd.tau(); }

} // namespace dualmax
