#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dualmax/problem.hpp"
#include "dualmax/rng.hpp"

namespace dualmax {

/// Shape of the admissible input-vector set before intersecting with the
/// annulus 1 <= |B| <= beta. The classifying matrix is
///   W = A^T A - (1 - gamma^-2)(I - S),
/// with eigenvalues lambda_1 >= ... >= lambda_n:
///   Empty  -- lambda_2 > 0 (impossible for n = 1, where lambda_2 := -inf),
///   All    -- lambda_1 <= 0,
///   Cone   -- otherwise: { B : B^T A U1 >= sqrt(lambda_1 (|B|^2 + rbar)) }
///             together with its mirror image through the origin.
enum class ConeKind { Empty, All, Cone };

struct ConeParams {
    ConeKind kind = ConeKind::Empty;
    /// Eigenvalues of W, sorted descending.
    Eigen::VectorXd lambda;
    /// Unit eigenvector for lambda_1; meaningful when kind == Cone.
    Eigen::VectorXd U1;
    /// Cached A * U1 (the cone axis lives along this direction in B-space).
    Eigen::VectorXd AU1;
    /// Membership tolerance band, 1e-9 * (1 + ||A||^2); boundary points are members.
    double band = 0.0;

    double lambda1() const { return lambda(0); }
};

/// Classify the admissible set for the given instance.
ConeParams compute_cone(const ProblemData& pd);

/// Membership test straight from the defining matrix inequality
///   A^T B (|B|^2 + rbar)^-1 B^T A >= W   (smallest eigenvalue >= -band)
/// combined with the annulus bounds.
bool member_direct(const ProblemData& pd, const Eigen::VectorXd& B);

/// Membership via the eigen-characterization (cone union, annulus).
bool member_cone(const ProblemData& pd, const ConeParams& cone, const Eigen::VectorXd& B);

/// Signed margins used to skip near-boundary points in equivalence sweeps:
/// positive inside, negative outside, magnitude comparable to `cone.band`.
double member_direct_margin(const ProblemData& pd, const Eigen::VectorXd& B);
double member_cone_margin(const ProblemData& pd, const ConeParams& cone, const Eigen::VectorXd& B);
/// min(|B| - 1, beta - |B|): distance to the annulus boundary.
double annulus_margin(const ProblemData& pd, const Eigen::VectorXd& B);

/// Feasible radius interval [max(1, r_min(d)), beta] along unit direction d,
/// or nullopt when the ray misses the set. r_min solves the radial form of
/// the cone inequality: r^2 ((d^T A U1)^2 - lambda_1) >= lambda_1 rbar.
std::optional<std::pair<double, double>> radial_interval(const ProblemData& pd,
                                                         const ConeParams& cone,
                                                         const Eigen::VectorXd& d);

/// min{ |B|^2 : B admissible }. Closed form: 1 for kind All; for a cone,
/// max{1, lambda_1 rbar / (|A U1|^2 - lambda_1)} reached along the cone axis.
/// Throws InfeasibleSetError when the set is empty (including min-norm > beta^2).
double min_norm_sq(const ProblemData& pd, const ConeParams& cone);

/// Draw a uniform-ish member: random direction (rejection against radial
/// feasibility), then uniform radius over the feasible interval. Covers both
/// cone branches and the full radius range.
Eigen::VectorXd sample(const ProblemData& pd, const ConeParams& cone, Rng& rng);

struct MaximizeOptions {
    /// Direction starts (cone axis, hints, coordinate axes, then pseudo-random fill).
    int direction_starts = 21;
    /// Radius starts per direction.
    int radius_starts = 3;
    /// Dense pre-scan resolution along the radius.
    int scan_points = 33;
    double rel_tol = 1e-9;
    int max_iterations = 60;
    /// Seed for the pseudo-random part of the start set; fixed => deterministic result.
    std::uint64_t start_seed = 0x5eedULL;
    /// Extra promising directions supplied by the caller (need not be unit or feasible).
    std::vector<Eigen::VectorXd> hints;
};

struct MaximizeResult {
    Eigen::VectorXd argmax;
    double value;
};

/// Multistart ascent of a continuous objective over the admissible set.
/// Radius is handled by dense scan + golden-section refinement, direction by
/// projected gradient on the sphere with exact projection onto the spherical
/// cap of feasible directions. Deterministic given the options.
MaximizeResult maximize_over_set(const ProblemData& pd, const ConeParams& cone,
                                 const std::function<double(const Eigen::VectorXd&)>& f,
                                 const MaximizeOptions& opts = {});

} // namespace dualmax
