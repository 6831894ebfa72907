#pragma once

#include <optional>
#include <string>
#include <vector>

#include "potts/boundary.hpp"
#include "potts/dynamics.hpp"
#include "potts/exactrec.hpp"
#include "potts/model.hpp"
#include "potts/tisgm.hpp"

namespace potts {

/// Membership of a strict profile in the two-block configuration classes:
/// the profile lies in B_m when its first m counts agree and its last q-m
/// counts agree; the sub-classes split on the sign of Delta = J(c^1 - c^q)
/// (the 0-indexed family) and on Delta - h1 (the 1-indexed family, defined
/// only once the low branch exists, i.e. for theta >= theta_m).
struct BSetMembership {
    int m = 0;
    bool in_Bm = false;
    int rel0 = 0;              ///< sign of Delta: +1 / 0 / -1 (ties at 1e-12)
    std::optional<int> rel1;   ///< sign of Delta - h1; empty below theta_m

    /// rel1, or a regime error when h1 is undefined at this theta.
    int rel1_or_throw() const;
};

BSetMembership bset_membership(const ModelParams& p, const SuccessorProfile& profile, int m);

/// Outcome of the two-block boundary classifier: the predicted weak limit of
/// the finite-volume measures under any configuration realizing the profile.
struct BoundaryClassification {
    TisgmDescriptor measure;      ///< P^omega, support in original colours
    int mu_index = 0;             ///< 0 free, 1 low branch, 2 high branch
    int m = 0;                    ///< normal-form class size (<= q/2)
    std::vector<int> small_class; ///< colours mapped to the leading block
    std::string case_label;       ///< theta regime that decided the outcome
};

/// Case table driving the prediction, after permuting colours so the smaller
/// count-class forms the leading block (ties between equal-sized blocks put
/// the larger count first):
///   theta =  theta_m : Delta >= h1 -> mu1, otherwise mu0;
///   theta_m < theta < q+1 : Delta > h1 -> mu2, = h1 -> mu1, < h1 -> mu0;
///   theta =  q+1     : Delta > 0 -> mu2, otherwise mu0;
///   theta >  q+1     : Delta > 0 -> mu2, < 0 -> mu1, = 0 -> mu0;
///   theta <  theta_m : mu0.
/// Profiles with three or more distinct counts are outside this table and
/// raise an error pointing at the empirical trajectory instead.
BoundaryClassification classify_boundary(const ModelParams& p, const SuccessorProfile& profile);

/// All strict two-block profiles with leading class size m: nonnegative
/// integer solutions of m a + (q-m) b = k expanded to count vectors
/// (a,..,a,b,..,b).  May be empty - e.g. no solution exists for q=10, m=4,
/// k=2, which is why the q=10 worked example cannot be strict.
std::vector<SuccessorProfile> feasible_profiles(const ModelParams& p, int m);

/// The closed-form criterion on (q, m) deciding whether ln theta stays above
/// the low branch on [theta_m, q+1]:
///   2m sqrt(m^2+1)(sqrt(m^2+1) - m) <= q <= 2m sqrt(m^2+1)(sqrt(m^2+1) + m),
/// cross-checked against the equivalent direct inequality
///   ln theta_m >= ln((q-m)/m); the two routes must agree.
struct QmCondition {
    bool holds = false;
    double lower = 0.0;
    double upper = 0.0;
    bool direct = false;
};

QmCondition qm_condition(int q, int m);

/// All solutions of ln theta = h1(theta, m) on (theta_m, q+1), located by a
/// 10^4-point sign scan refined by bisection (empty when the graph of
/// ln theta never meets the low branch - exactly the case qm_condition
/// certifies).
std::vector<double> solve_theta_star(int q, int m);

/// Weak-limit identification by running the exact recursion under the rule's
/// configurations for n = 1..n_max: resolved once successive level-1 vectors
/// differ by less than tol AND the vector sits within 1e-6 of a catalogued
/// measure; otherwise the trajectory end is reported unresolved.
struct EmpiricalResult {
    bool resolved = false;
    TisgmDescriptor descriptor;   ///< valid when resolved
    long long n_reached = 0;      ///< volume depth of the decision (or n_max)
    double final_diff = 0.0;      ///< last successive sup-norm difference
    LogRatioVector final_y;       ///< last level-1 log-ratio vector
    double match_distance = 0.0;  ///< sup-norm distance to the matched vector
};

EmpiricalResult empirical_classify(const ModelParams& p, const SuccessorRule& rule,
                                   int n_max = 400, double tol = 1e-9);

/// The settle-and-match rule of empirical_classify applied to an
/// already-computed trajectory (volumes in increasing order).
EmpiricalResult match_trajectory(const ModelParams& p, const std::vector<TrajectoryPoint>& traj,
                                 double tol);

}  // namespace potts
