#include "dualmax/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dualmax {

namespace {

// Max of a quadratic a2 r^2 + a1 r + a0 over [lo, hi].
double quadratic_max(double a2, double a1, double a0, double lo, double hi) {
    double best = std::max(a2 * lo * lo + a1 * lo + a0, a2 * hi * hi + a1 * hi + a0);
    if (a2 < 0.0) {
        const double vertex = -a1 / (2.0 * a2);
        if (vertex > lo && vertex < hi) best = std::max(best, a2 * vertex * vertex + a1 * vertex + a0);
    }
    return best;
}

// Max over both sign branches of c2 |B|^2 + c1 B.dir + c0 with |B| in the
// feasible radius range; scalar case only (B = sign * r).
double scalar_branch_max(const ProblemData& pd, const ConeParams& cone, double c2, double c1,
                         double c0) {
    Eigen::VectorXd dir(1);
    dir << 1.0;
    const auto interval = radial_interval(pd, cone, dir);
    if (!interval) throw InfeasibleSetError("admissible set is empty");
    const double lo = interval->first, hi = interval->second;
    return std::max(quadratic_max(c2, c1, c0, lo, hi), quadratic_max(c2, -c1, c0, lo, hi));
}

} // namespace

double min_z_B(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone) {
    const ZQuadratic q = z_quadratic(pd, Z);
    if (pd.n() == 1) {
        // z_B/gamma^2 = c + 2 g b + zuu b^2: negate and use the branch maximizer.
        return -pd.gamma_sq() * scalar_branch_max(pd, cone, -q.zuu, -2.0 * q.g(0), -q.c);
    }
    MaximizeOptions opts;
    opts.hints = {q.g};
    auto result = maximize_over_set(
        pd, cone,
        [&](const Eigen::VectorXd& B) {
            return -(q.c + 2.0 * B.dot(q.g) + q.zuu * B.squaredNorm());
        },
        opts);
    return -pd.gamma_sq() * result.value;
}

double value_hat(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                 const Eigen::VectorXd& x) {
    const double xsq = x.squaredNorm();
    return std::max(xsq - min_z_B(pd, Z, cone), pd.tau() * xsq - z_bar(pd, Z, cone));
}

double F_u_VB(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& x,
              const ActionDistribution& action, const Eigen::VectorXd& B) {
    const Eigen::VectorXd ax = pd.A() * x;
    const double inv1mg = 1.0 / pd.one_minus_gamma_inv_sq();
    return x.dot(pd.S() * x) + action.second_moment * pd.R() +
           inv1mg * (ax.squaredNorm() + 2.0 * action.mean * B.dot(ax) +
                     action.second_moment * B.squaredNorm()) -
           z_B(pd, Z, B);
}

double F_u_Vbar(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                const Eigen::VectorXd& x, const ActionDistribution& action) {
    const Eigen::VectorXd ax = pd.A() * x;
    const double denom = 1.0 / pd.tau() - 1.0 / pd.gamma_sq();
    return x.dot(pd.S() * x) + action.second_moment * pd.R() + ax.squaredNorm() / denom -
           pd.gamma_sq() * action.second_moment - z_bar(pd, Z, cone);
}

BellmanReport check_bellman(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                            const Eigen::VectorXd& x, double tol_scale) {
    if (!pd.gamma_admissible())
        throw InvalidInstanceError("check_bellman: gain level fails the admissibility test");

    const PolicyDecision dec = decide(pd, Z, cone, x);
    const ActionDistribution& action = dec.action;

    BellmanReport report;
    report.value_hat = value_hat(pd, Z, cone, x);
    report.lhs_bar = F_u_Vbar(pd, Z, cone, x, action);

    // max_B F_u_VB: quadratic in B once the statistic enters through its
    // even/odd split, so the scalar case is exact and the general case runs
    // the multistart engine with the sign fold max{F(B), F(-B)} built in.
    const ZQuadratic q = z_quadratic(pd, Z);
    const Eigen::VectorXd ax = pd.A() * x;
    const double inv1mg = 1.0 / pd.one_minus_gamma_inv_sq();
    const double gsq = pd.gamma_sq();
    const double const0 =
        x.dot(pd.S() * x) + action.second_moment * pd.R() + inv1mg * ax.squaredNorm() - gsq * q.c;
    const double quad_coeff = inv1mg * action.second_moment - gsq * q.zuu;
    if (pd.n() == 1) {
        const double lin_coeff = 2.0 * (inv1mg * action.mean * ax(0) - gsq * q.g(0));
        report.lhs_exploit_family =
            scalar_branch_max(pd, cone, quad_coeff, lin_coeff, const0);
    } else {
        MaximizeOptions opts;
        opts.hints = {ax, q.g};
        auto result = maximize_over_set(
            pd, cone,
            [&](const Eigen::VectorXd& B) {
                const double odd = 2.0 * (inv1mg * action.mean * B.dot(ax) - gsq * B.dot(q.g));
                return const0 + quad_coeff * B.squaredNorm() + std::abs(odd);
            },
            opts);
        report.lhs_exploit_family = result.value;
    }

    report.tolerance = tol_scale * (1.0 + std::abs(report.value_hat));
    report.margin = report.value_hat - std::max(report.lhs_bar, report.lhs_exploit_family);
    report.pass = report.margin >= -report.tolerance;
    return report;
}

} // namespace dualmax
