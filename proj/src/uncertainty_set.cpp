#include "dualmax/uncertainty_set.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace dualmax {

namespace {

Eigen::MatrixXd classifying_matrix(const ProblemData& pd) {
    const int n = pd.n();
    return pd.A().transpose() * pd.A() -
           pd.one_minus_gamma_inv_sq() * (Eigen::MatrixXd::Identity(n, n) - pd.S());
}

double golden_max(const std::function<double(double)>& h, double lo, double hi, double tol) {
    static const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = h(x1), f2 = h(x2);
    while (b - a > tol) {
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
    return 0.5 * (a + b);
}

// Best radius along fixed unit direction d: dense scan then golden refinement.
// Returns (r, f(r d)).
std::pair<double, double> best_radius(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& d, double r_lo, double r_hi,
                                      int scan_points, Eigen::VectorXd& work) {
    auto eval = [&](double r) {
        work = r * d;
        return f(work);
    };
    if (r_hi - r_lo < 1e-14) return {r_lo, eval(r_lo)};
    const int m = std::max(scan_points, 5);
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    const double step = (r_hi - r_lo) / (m - 1);
    for (int i = 0; i < m; ++i) {
        const double v = eval(r_lo + i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double a = r_lo + std::max(0, best - 1) * step;
    const double b = r_lo + std::min(m - 1, best + 1) * step;
    const double r = golden_max(eval, a, b, 1e-12 * (1.0 + r_hi));
    const double v = eval(r);
    if (v >= best_val) return {r, v};
    return {r_lo + best * step, best_val};
}

} // namespace

ConeParams compute_cone(const ProblemData& pd) {
    const int n = pd.n();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(classifying_matrix(pd));
    if (es.info() != Eigen::Success) throw NumericError("compute_cone: eigensolver failed");

    ConeParams cone;
    cone.band = 1e-9 * (1.0 + pd.a_norm() * pd.a_norm());
    cone.lambda = es.eigenvalues().reverse();
    const double lambda1 = cone.lambda(0);
    const double lambda2 = n >= 2 ? cone.lambda(1) : -std::numeric_limits<double>::infinity();

    if (n >= 2 && lambda2 > cone.band) {
        cone.kind = ConeKind::Empty;
    } else if (lambda1 <= 0.0) {
        cone.kind = ConeKind::All;
    } else {
        cone.kind = ConeKind::Cone;
        cone.U1 = es.eigenvectors().col(n - 1);
        cone.U1.normalize();
        cone.AU1 = pd.A() * cone.U1;
    }
    return cone;
}

double annulus_margin(const ProblemData& pd, const Eigen::VectorXd& B) {
    const double r = B.norm();
    return std::min(r - 1.0, pd.beta() - r);
}

double member_direct_margin(const ProblemData& pd, const Eigen::VectorXd& B) {
    const Eigen::VectorXd AtB = pd.A().transpose() * B;
    const Eigen::MatrixXd lhs = AtB * AtB.transpose() / (B.squaredNorm() + pd.rbar());
    return min_eigenvalue(lhs - classifying_matrix(pd));
}

bool member_direct(const ProblemData& pd, const Eigen::VectorXd& B) {
    const double band = 1e-9 * (1.0 + pd.a_norm() * pd.a_norm());
    if (annulus_margin(pd, B) < -band) return false;
    return member_direct_margin(pd, B) >= -band;
}

double member_cone_margin(const ProblemData& pd, const ConeParams& cone, const Eigen::VectorXd& B) {
    switch (cone.kind) {
        case ConeKind::Empty:
            return -std::numeric_limits<double>::infinity();
        case ConeKind::All:
            return std::numeric_limits<double>::infinity();
        case ConeKind::Cone:
        default:
            return std::abs(B.dot(cone.AU1)) -
                   std::sqrt(std::max(0.0, cone.lambda1() * (B.squaredNorm() + pd.rbar())));
    }
}

bool member_cone(const ProblemData& pd, const ConeParams& cone, const Eigen::VectorXd& B) {
    if (cone.kind == ConeKind::Empty) return false;
    if (annulus_margin(pd, B) < -cone.band) return false;
    if (cone.kind == ConeKind::All) return true;
    return member_cone_margin(pd, cone, B) >= -cone.band;
}

std::optional<std::pair<double, double>> radial_interval(const ProblemData& pd,
                                                         const ConeParams& cone,
                                                         const Eigen::VectorXd& d) {
    if (cone.kind == ConeKind::Empty) return std::nullopt;
    if (cone.kind == ConeKind::All) return std::make_pair(1.0, pd.beta());
    const double s = d.dot(cone.AU1);
    const double lambda1 = cone.lambda1();
    const double excess = s * s - lambda1;
    if (excess <= 0.0) return std::nullopt;
    const double r_min_sq = lambda1 * pd.rbar() / excess;
    const double r_lo = std::max(1.0, std::sqrt(r_min_sq));
    if (r_lo > pd.beta()) return std::nullopt;
    return std::make_pair(r_lo, pd.beta());
}

double min_norm_sq(const ProblemData& pd, const ConeParams& cone) {
    if (cone.kind == ConeKind::Empty)
        throw InfeasibleSetError("admissible set is empty (two or more positive eigenvalues)");
    double result = 1.0;
    if (cone.kind == ConeKind::Cone) {
        const double axis_gain = cone.AU1.squaredNorm();
        const double lambda1 = cone.lambda1();
        if (axis_gain <= lambda1)
            throw InfeasibleSetError("admissible set is empty (cone contains no finite ray)");
        result = std::max(1.0, lambda1 * pd.rbar() / (axis_gain - lambda1));
    }
    if (result > pd.beta() * pd.beta() * (1.0 + 1e-12))
        throw InfeasibleSetError("admissible set is empty (min norm exceeds beta)");
    return result;
}

Eigen::VectorXd sample(const ProblemData& pd, const ConeParams& cone, Rng& rng) {
    min_norm_sq(pd, cone); // throws when the set is empty
    const int n = pd.n();
    Eigen::VectorXd d(n);
    for (int attempt = 0; attempt < 20000; ++attempt) {
        for (int i = 0; i < n; ++i) d(i) = rng.normal();
        const double norm = d.norm();
        if (norm < 1e-12) continue;
        d /= norm;
        if (auto interval = radial_interval(pd, cone, d)) {
            const double r = rng.uniform(interval->first, interval->second);
            return r * d;
        }
    }
    // Narrow cone: fall back to the axis, which is always feasible here.
    Eigen::VectorXd axis = cone.AU1.normalized();
    if (rng.uniform() < 0.5) axis = -axis;
    const auto interval = radial_interval(pd, cone, axis);
    return rng.uniform(interval->first, interval->second) * axis;
}

namespace {

// Feasible directions form two spherical caps |d . vhat| >= kappa around the
// normalized cone axis (kappa from the widest radius, r = beta). Geodesic
// projection onto the nearer cap keeps ascent iterates feasible.
struct DirectionCap {
    bool active = false;
    Eigen::VectorXd vhat;
    double kappa = 0.0;

    Eigen::VectorXd project(const Eigen::VectorXd& d) const {
        if (!active) return d;
        const double t = d.dot(vhat);
        if (std::abs(t) >= kappa) return d;
        const double side = t >= 0.0 ? 1.0 : -1.0;
        Eigen::VectorXd tangent = d - t * vhat;
        const double tn = tangent.norm();
        if (tn < 1e-14) return side * vhat;
        return side * kappa * vhat + std::sqrt(std::max(0.0, 1.0 - kappa * kappa)) * tangent / tn;
    }
};

DirectionCap make_cap(const ProblemData& pd, const ConeParams& cone) {
    DirectionCap cap;
    if (cone.kind != ConeKind::Cone) return cap;
    const double axis_norm = cone.AU1.norm();
    const double lambda1 = cone.lambda1();
    const double beta = pd.beta();
    // |d . AU1| >= sqrt(lambda1 (1 + rbar / beta^2)) defines the widest cap.
    const double c_beta = std::sqrt(lambda1 * (1.0 + pd.rbar() / (beta * beta)));
    cap.active = true;
    cap.vhat = cone.AU1 / axis_norm;
    cap.kappa = std::min(1.0, c_beta / axis_norm);
    return cap;
}

} // namespace

MaximizeResult maximize_over_set(const ProblemData& pd, const ConeParams& cone,
                                 const std::function<double(const Eigen::VectorXd&)>& f,
                                 const MaximizeOptions& opts) {
    min_norm_sq(pd, cone); // throws when the set is empty
    const int n = pd.n();
    const DirectionCap cap = make_cap(pd, cone);
    Eigen::VectorXd work(n);

    // ---- start directions -------------------------------------------------
    std::vector<Eigen::VectorXd> dirs;
    auto push_dir = [&](Eigen::VectorXd d) {
        const double norm = d.norm();
        if (!(norm > 1e-12) || !d.allFinite()) return;
        d /= norm;
        d = cap.project(d);
        if (!radial_interval(pd, cone, d)) return;
        for (const auto& existing : dirs)
            if ((existing - d).norm() < 1e-9) return;
        dirs.push_back(std::move(d));
    };
    if (cone.kind == ConeKind::Cone) {
        push_dir(cone.AU1);
        push_dir(-cone.AU1);
    }
    for (const auto& hint : opts.hints) {
        push_dir(hint);
        push_dir(-hint);
    }
    for (int i = 0; i < n && static_cast<int>(dirs.size()) < opts.direction_starts; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(i) = 1.0;
        push_dir(e);
        push_dir(-e);
    }
    Rng rng(opts.start_seed);
    for (int guard = 0; guard < 64 * opts.direction_starts &&
                        static_cast<int>(dirs.size()) < opts.direction_starts;
         ++guard) {
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d(i) = rng.normal();
        push_dir(d);
    }

    MaximizeResult best;
    best.value = -std::numeric_limits<double>::infinity();
    auto consider = [&](const Eigen::VectorXd& B, double value) {
        if (value > best.value) {
            best.value = value;
            best.argmax = B;
        }
    };

    const double grad_step = 1e-6;
    for (const auto& d0 : dirs) {
        const auto interval0 = radial_interval(pd, cone, d0);
        std::vector<double> radii;
        radii.push_back(interval0->first);
        if (opts.radius_starts >= 3)
            radii.push_back(0.5 * (interval0->first + interval0->second));
        if (opts.radius_starts >= 2) radii.push_back(interval0->second);
        for (double r0 : radii) {
            Eigen::VectorXd d = d0;
            auto interval = *interval0;
            auto [r, value] = best_radius(f, d, interval.first, interval.second,
                                          opts.scan_points, work);
            (void)r0;
            if (n == 1) {
                consider(r * d, value);
                continue;
            }
            // Projected gradient ascent on the sphere, radius refreshed by line search.
            for (int iter = 0; iter < opts.max_iterations; ++iter) {
                Eigen::VectorXd B = r * d;
                Eigen::VectorXd grad(n);
                for (int i = 0; i < n; ++i) {
                    work = B;
                    work(i) += grad_step;
                    const double fp = f(work);
                    work(i) = B(i) - grad_step;
                    const double fm = f(work);
                    grad(i) = (fp - fm) / (2.0 * grad_step);
                }
                Eigen::VectorXd tangent = grad - grad.dot(d) * d;
                const double tnorm = tangent.norm();
                if (tnorm * (1.0 + std::abs(value)) < 1e-14) break;
                double eta = 0.5 / (1.0 + tnorm);
                bool improved = false;
                for (int bt = 0; bt < 30; ++bt, eta *= 0.5) {
                    Eigen::VectorXd d_try = (d + eta * tangent).normalized();
                    d_try = cap.project(d_try);
                    const auto trial_interval = radial_interval(pd, cone, d_try);
                    if (!trial_interval) continue;
                    const double r_try =
                        std::clamp(r, trial_interval->first, trial_interval->second);
                    work = r_try * d_try;
                    const double v_try = f(work);
                    if (v_try > value) {
                        d = d_try;
                        interval = *trial_interval;
                        r = r_try;
                        value = v_try;
                        improved = true;
                        break;
                    }
                }
                if (!improved) break;
                if (iter % 4 == 3 || !improved) {
                    auto [r_new, v_new] =
                        best_radius(f, d, interval.first, interval.second, opts.scan_points, work);
                    if (v_new > value) {
                        r = r_new;
                        value = v_new;
                    }
                }
                if (value - best.value < opts.rel_tol * (1.0 + std::abs(value)) && iter > 8) break;
            }
            auto [r_fin, v_fin] = best_radius(f, d, interval.first, interval.second,
                                              opts.scan_points, work);
            if (v_fin > value) {
                r = r_fin;
                value = v_fin;
            }
            consider(r * d, value);
        }
    }
    if (!best.argmax.size()) throw NumericError("maximize_over_set: no feasible start found");
    return best;
}

} // namespace dualmax
