#include "dualmax/statistics.hpp"

#include <atomic>

namespace dualmax {

namespace {
std::atomic<std::uint64_t> g_version_counter{1};
}

DataMatrix::DataMatrix(int n)
    : Z_(Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1)),
      n_(n),
      version_(g_version_counter.fetch_add(1)) {
    if (n < 1) throw InvalidInstanceError("DataMatrix: n must be positive");
}

void DataMatrix::update(const Eigen::VectorXd& x, double u, const Eigen::VectorXd& xplus) {
    if (x.size() != n_ || xplus.size() != n_)
        throw InvalidInstanceError("DataMatrix::update: dimension mismatch");
    Eigen::VectorXd v(2 * n_ + 1);
    v << x, u, xplus;
    Z_.noalias() += v * v.transpose();
    Z_ = 0.5 * (Z_ + Z_.transpose());
    ++count_;
    version_ = g_version_counter.fetch_add(1);
}

DataMatrix updated(const DataMatrix& Z, const Eigen::VectorXd& x, double u,
                   const Eigen::VectorXd& xplus) {
    DataMatrix out = Z;
    out.update(x, u, xplus);
    return out;
}

double z_B(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& B) {
    const int n = pd.n();
    Eigen::MatrixXd G(n, 2 * n + 1);
    G.leftCols(n) = pd.A();
    G.col(n) = B;
    G.rightCols(n) = -Eigen::MatrixXd::Identity(n, n);
    return pd.gamma_sq() * (G * Z.matrix() * G.transpose()).trace();
}

double z_tilde(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& B) {
    return 0.5 * (z_B(pd, Z, -B) - z_B(pd, Z, B));
}

ZQuadratic z_quadratic(const ProblemData& pd, const DataMatrix& Z) {
    const int n = pd.n();
    const auto& M = Z.matrix();
    const auto Zxx = M.topLeftCorner(n, n);
    const auto Zxu = M.block(0, n, n, 1);
    const auto Zxp = M.topRightCorner(n, n);
    const auto Zpu = M.block(n + 1, n, n, 1);
    const auto Zpp = M.bottomRightCorner(n, n);

    ZQuadratic q;
    q.c = (pd.A().transpose() * pd.A() * Zxx).trace() - 2.0 * (pd.A() * Zxp).trace() +
          Zpp.trace();
    q.g = pd.A() * Zxu - Zpu;
    q.zuu = Z.zuu();
    return q;
}

double z_bar(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone) {
    const ZQuadratic q = z_quadratic(pd, Z);
    return pd.gamma_sq() * (q.c + q.zuu * min_norm_sq(pd, cone));
}

} // namespace dualmax
