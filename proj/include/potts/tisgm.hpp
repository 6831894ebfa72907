#pragma once

#include <map>
#include <string>
#include <vector>

namespace potts {

/// Critical weight for the class-m branches on the order-2 tree:
///   theta_m = 1 + 2 sqrt(m (q - m)),  1 <= m <= q-1.
/// Symmetric (theta_m = theta_{q-m}), increasing up to floor(q/2), and the
/// uniqueness threshold theta_c = q + 1 is theta_{q/2} when q is even.
double theta_crit(int q, int m);

/// A non-trivial class-m branch on the order-2 tree: x is a positive root of
///   m x^2 - (theta - 1) x + (q - m) = 0,  h = 2 ln x.
struct Branch {
    double x = 0.0;
    double h = 0.0;
};

/// Both branches in increasing order, for k = 2 and m <= floor(q/2).  Returns
/// nothing below theta_m, one (double) root at theta_m (discriminant clamped
/// at 1e-12), two roots above.  The smaller root is recovered through Vieta
/// (x1 x2 = (q-m)/m) to avoid cancellation.
std::vector<Branch> solve_branch(int q, double theta, int m);

/// Restriction of the height-doubling map to the class-m invariant line:
///   f_m(h) = k ln[ ((theta+m-1) e^h + q-m) / (m e^h + q-m-1+theta) ].
double fm(int q, double theta, int m, int k, double h);

/// d f_m / d h in closed form:
///   k (theta-1)(theta+q-1) e^h / [ (m e^h + theta+q-m-1)((theta+m-1) e^h + q-m) ].
double fm_derivative(int q, double theta, int m, int k, double h);

/// All solutions of h = f_m(h), found by a sign scan over the invariant
/// bounds [a-1, A+1] refined by bisection to 1e-12.  The exact root h = 0 is
/// seeded explicitly (f_m(0) = 0 identically, and at theta = q+1 the scan
/// cannot see it because the graph is tangent there).
std::vector<double> fixed_points_numeric(int q, double theta, int m, int k);

enum class BranchKind { zero = 0, low = 1, high = 2 };
std::string branch_name(BranchKind b);

/// One translation-invariant splitting Gibbs measure.  The boundary law puts
/// weight x^2 on the m support colours and 1 elsewhere; normalized on colour
/// q this reads as the (q-1)-vector with h on the support when q is outside
/// it, and -h on the complement when q belongs to it.
struct TisgmDescriptor {
    int q = 0;
    double theta = 1.0;
    int m = 0;  // 0 for the free measure
    BranchKind branch = BranchKind::zero;
    std::vector<int> support;  // size m, subset of 1..q, sorted
    double h = 0.0;

    std::vector<double> log_ratio_vector() const;  // length q-1
    std::string to_json() const;
};

/// Complete catalogue at one (q, theta), deduplicated so that each measure
/// appears exactly once:
///  - the h1 branch coincides with the free measure at theta = q+1 and is
///    dropped there;
///  - for even q and m = q/2 the low branch on a support equals the high
///    branch on the complement (x1 x2 = 1), so only the high branch is kept;
///  - at theta = theta_m the two branches merge into one descriptor.
struct RegimeReport {
    int q = 0;
    double theta = 1.0;
    std::string regime;  // unique | at_theta_m | ladder | at_theta_c | generic
    long long total = 0;
    std::map<std::pair<int, BranchKind>, long long> multiplicity;
    std::vector<TisgmDescriptor> descriptors;
};

RegimeReport enumerate_tisgms(int q, double theta);

/// Phase label at (q, theta) without building the catalogue:
/// unique | at_theta_m | ladder | at_theta_c | generic.
std::string regime_label(int q, double theta);

/// Closed-form count of distinct measures (theta comparisons at tolerance
/// 1e-9):
///   theta < theta_1                        : 1
///   theta_m < theta < theta_{m+1}          : 1 + 2 sum_{s<=m} C(q,s)
///   theta > theta_{floor(q/2)}, theta != q+1 : 2^q - 1
///   theta = q+1                            : 2^{q-1}            (q odd)
///                                            2^{q-1} - C(q-1,q/2) (q even)
///   theta = theta_m                        : 1 + C(q,m) + 2 sum_{s<m} C(q,s)
long long count_tisgms(int q, double theta);

}  // namespace potts
