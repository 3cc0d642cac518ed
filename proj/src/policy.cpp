#include "dualmax/policy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace dualmax {

ActionDistribution ActionDistribution::deterministic(double u) {
    ActionDistribution a;
    a.support = {{u, 1.0}};
    a.mean = u;
    a.second_moment = u * u;
    return a;
}

ActionDistribution ActionDistribution::two_point(double mean, double magnitude) {
    if (!(magnitude >= 0.0) || std::abs(mean) > magnitude * (1.0 + 1e-12))
        throw NumericError("two_point: |mean| must not exceed the magnitude");
    if (magnitude == 0.0) return deterministic(0.0);
    ActionDistribution a;
    const double p = std::clamp(0.5 * (1.0 + mean / magnitude), 0.0, 1.0);
    a.support = {{magnitude, p}, {-magnitude, 1.0 - p}};
    a.mean = mean;
    a.second_moment = magnitude * magnitude;
    return a;
}

double realize(const ActionDistribution& action, Rng& rng) {
    if (action.is_deterministic()) return action.support.front().value;
    double ticket = rng.uniform();
    for (const auto& atom : action.support) {
        if (ticket < atom.probability) return atom.value;
        ticket -= atom.probability;
    }
    return action.support.back().value;
}

double gain_times_x(const ProblemData& pd, const Eigen::VectorXd& B, const Eigen::VectorXd& x) {
    return B.dot(pd.A() * x) / (pd.rbar() + B.squaredNorm());
}

namespace {

struct SelectContext {
    Eigen::VectorXd ax;   // A x
    double ax_sq;         // |A x|^2
    double inv1mg;        // (1 - gamma^-2)^-1
    double gsq;
    double rbar;
    ZQuadratic zq;
};

// Criterion value at B; `odd_out`, when given, receives the odd-in-B part of
// the winning term (used for sign selection).
double criterion(const SelectContext& ctx, const Eigen::VectorXd& B) {
    const double q = B.dot(ctx.ax);
    const double rho = B.squaredNorm();
    const double ratio = q * q / (rho + ctx.rbar);
    const double z_even = ctx.gsq * (ctx.zq.c + ctx.zq.zuu * rho);
    const double z_odd = 2.0 * ctx.gsq * B.dot(ctx.zq.g);
    const double term1 = (ctx.ax_sq - ratio) * ctx.inv1mg - (z_even + z_odd);
    const double term2 = (ctx.ax_sq + ratio) * ctx.inv1mg - z_even;
    return std::max(term1, term2);
}

// Scalar instance: one pass over the radius range covers both sign branches,
// because the even parts coincide and the odd part of term1 enters as
// +2 gamma^2 |g| r at the optimal sign.
Eigen::VectorXd select_scalar(const ProblemData& pd, const ConeParams& cone,
                              const SelectContext& ctx) {
    Eigen::VectorXd dir(1);
    dir << 1.0;
    const auto interval = radial_interval(pd, cone, dir);
    if (!interval) throw InfeasibleSetError("select_Bhat: admissible set is empty");
    const double r_lo = interval->first, r_hi = interval->second;
    const double g = ctx.zq.g(0);
    const double abs_g_term = 2.0 * ctx.gsq * std::abs(g);

    auto term1_best_sign = [&](double r) {
        const double ratio = ctx.ax_sq * r * r / (r * r + ctx.rbar);
        return (ctx.ax_sq - ratio) * ctx.inv1mg -
               ctx.gsq * (ctx.zq.c + ctx.zq.zuu * r * r) + abs_g_term * r;
    };
    auto term2_even = [&](double r) {
        const double ratio = ctx.ax_sq * r * r / (r * r + ctx.rbar);
        return (ctx.ax_sq + ratio) * ctx.inv1mg - ctx.gsq * (ctx.zq.c + ctx.zq.zuu * r * r);
    };

    const int m = 96;
    const double step = (r_hi - r_lo) / (m - 1);
    int best1 = 0, best2 = 0;
    double v1 = -std::numeric_limits<double>::infinity();
    double v2 = v1;
    if (step <= 0.0) {
        v1 = term1_best_sign(r_lo);
        v2 = term2_even(r_lo);
    } else {
        for (int i = 0; i < m; ++i) {
            const double r = r_lo + i * step;
            const double t1 = term1_best_sign(r);
            const double t2 = term2_even(r);
            if (t1 > v1) {
                v1 = t1;
                best1 = i;
            }
            if (t2 > v2) {
                v2 = t2;
                best2 = i;
            }
        }
    }
    // Golden refinement of each term around its scan winner.
    static const double invphi = 0.6180339887498949;
    auto refine = [&](const auto& h, int best, double& value) {
        if (step <= 0.0) return r_lo;
        double a = r_lo + std::max(0, best - 1) * step;
        double b = r_lo + std::min(m - 1, best + 1) * step;
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = h(x1), f2 = h(x2);
        while (b - a > 1e-13 * (1.0 + r_hi)) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = h(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = h(x1);
            }
        }
        const double r = 0.5 * (a + b);
        const double v = h(r);
        if (v > value) {
            value = v;
            return r;
        }
        return r_lo + best * step;
    };
    const double r1 = refine(term1_best_sign, best1, v1);
    const double r2 = refine(term2_even, best2, v2);

    // Sign: term1 is maximized with sign(b) = -sign(g); term2 is even, and the
    // z_tilde >= 0 tie-break prefers -sign(g) as well. With g = 0 prefer
    // b * Ax >= 0, then the positive branch.
    double sign;
    if (g != 0.0)
        sign = g < 0.0 ? 1.0 : -1.0;
    else if (ctx.ax(0) != 0.0)
        sign = ctx.ax(0) > 0.0 ? 1.0 : -1.0;
    else
        sign = 1.0;

    Eigen::VectorXd B(1);
    B << sign * (v1 >= v2 ? r1 : r2);
    return B;
}

Eigen::VectorXd select_general(const ProblemData& pd, const ConeParams& cone,
                               const SelectContext& ctx) {
    MaximizeOptions opts;
    opts.hints = {ctx.ax, pd.A().transpose() * ctx.ax, ctx.zq.g};
    auto result = maximize_over_set(
        pd, cone, [&](const Eigen::VectorXd& B) { return criterion(ctx, B); }, opts);

    Eigen::VectorXd B = result.argmax;
    double value = result.value;
    const double tie_tol = 1e-10 * (1.0 + std::abs(value));
    const double ztilde = -2.0 * ctx.gsq * B.dot(ctx.zq.g);
    if (ztilde < 0.0) {
        // The mirrored point has z_tilde >= 0 and never scores lower.
        const double mirrored = criterion(ctx, -B);
        if (mirrored >= value - tie_tol) {
            B = -B;
            value = std::max(value, mirrored);
        }
    }
    if (B.dot(ctx.ax) < 0.0 && std::abs(B.dot(ctx.zq.g)) * 2.0 * ctx.gsq <= tie_tol &&
        criterion(ctx, -B) >= value - tie_tol) {
        B = -B;
    } else if (B.dot(ctx.ax) == 0.0 && B.dot(ctx.zq.g) == 0.0) {
        // Full tie: settle lexicographically.
        for (int i = 0; i < B.size(); ++i) {
            if (B(i) != 0.0) {
                if (B(i) < 0.0) B = -B;
                break;
            }
        }
    }
    return B;
}

SelectContext make_context(const ProblemData& pd, const DataMatrix& Z, const Eigen::VectorXd& x) {
    SelectContext ctx;
    ctx.ax = pd.A() * x;
    ctx.ax_sq = ctx.ax.squaredNorm();
    ctx.inv1mg = 1.0 / pd.one_minus_gamma_inv_sq();
    ctx.gsq = pd.gamma_sq();
    ctx.rbar = pd.rbar();
    ctx.zq = z_quadratic(pd, Z);
    return ctx;
}

PolicyDecision decide_with_context(const ProblemData& pd, const ConeParams& cone,
                                   const SelectContext& ctx) {
    PolicyDecision dec;
    dec.Bhat = pd.n() == 1 ? select_scalar(pd, cone, ctx) : select_general(pd, cone, ctx);

    const double q = dec.Bhat.dot(ctx.ax);
    const double k = q / (ctx.rbar + dec.Bhat.squaredNorm());
    dec.Khat_x = k;
    dec.ztilde_at_Bhat = -2.0 * ctx.gsq * dec.Bhat.dot(ctx.zq.g);

    const double threshold = 2.0 * k * q * ctx.inv1mg;
    if (dec.ztilde_at_Bhat >= threshold) {
        dec.branch = Branch::Exploit;
        dec.action = ActionDistribution::deterministic(k == 0.0 ? 0.0 : -k);
    } else {
        dec.branch = Branch::Explore;
        assert(q != 0.0); // a zero product would force the exploit test to pass
        const double mean = -dec.ztilde_at_Bhat / (2.0 * q * ctx.inv1mg);
        dec.action = ActionDistribution::two_point(mean, std::abs(k));
    }
    return dec;
}

} // namespace

Eigen::VectorXd select_Bhat(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                            const Eigen::VectorXd& x) {
    min_norm_sq(pd, cone); // throws when the set is empty
    const SelectContext ctx = make_context(pd, Z, x);
    return pd.n() == 1 ? select_scalar(pd, cone, ctx) : select_general(pd, cone, ctx);
}

PolicyDecision decide(const ProblemData& pd, const DataMatrix& Z, const ConeParams& cone,
                      const Eigen::VectorXd& x) {
    if (!pd.gamma_admissible())
        throw InvalidInstanceError("decide: gain level fails the admissibility test");
    min_norm_sq(pd, cone);
    return decide_with_context(pd, cone, make_context(pd, Z, x));
}

const PolicyDecision& Policy::decide(const DataMatrix& Z, const Eigen::VectorXd& x) const {
    if (has_memo_ && memo_version_ == Z.version() && memo_x_.size() == x.size() && memo_x_ == x)
        return memo_;
    memo_ = dualmax::decide(*pd_, Z, *cone_, x);
    memo_version_ = Z.version();
    memo_x_ = x;
    has_memo_ = true;
    return memo_;
}

} // namespace dualmax
