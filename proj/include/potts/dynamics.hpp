#pragma once

#include <string>
#include <vector>

#include "potts/exactrec.hpp"
#include "potts/model.hpp"
#include "potts/tisgm.hpp"

namespace potts {

/// One step of the boundary-law dynamical system, G(v) = k F(v), where F is
/// the single-edge transfer map on normalized log-ratios.  G's fixed points
/// are exactly the translation-invariant boundary laws.
LogRatioVector step_G(const ModelParams& p, const LogRatioVector& v);

/// Fixed-point iteration of G with a sup-norm stopping rule.  On
/// non-convergence the report carries the last two iterates instead of a
/// limit.
struct IterateResult {
    LogRatioVector v;      ///< final iterate (the limit when converged)
    LogRatioVector prev;   ///< iterate before the final one
    long long iterations = 0;
    bool converged = false;
    double final_diff = 0.0;  ///< sup-norm of v - prev at the last step
};

IterateResult iterate(const ModelParams& p, const LogRatioVector& v0,
                      double tol = 1e-12, long long max_iter = 100000);

/// Predicted limit of G-iteration started on the invariant line I_m at the
/// point whose first m coordinates equal v0_first (the rest are zero).
/// Case analysis of the scalar restriction f_m:
///   theta <  theta_m : everything converges to the free measure;
///   theta == theta_m : v0 >= h1 -> merged branch, v0 < h1 -> free;
///   theta_m < theta < q+1 : v0 > h1 -> high, == h1 -> low, < h1 -> free;
///   theta == q+1     : v0 > 0 -> high, <= 0 -> free;
///   theta >  q+1     : v0 > 0 -> high, == 0 -> free, < 0 -> low.
/// Regime comparisons at 1e-9 on theta; ties on v0 at 1e-12.  For even q and
/// m = q/2 the low-branch answer is reported in its canonical form (high
/// branch on the complementary support); at theta = q+1 = theta_{q/2} the
/// merged branch is the free measure itself and everything converges to it.
TisgmDescriptor basin_predict(const ModelParams& p, int m, double v0_first);

/// Analytic Jacobian of G, row-major: out[l][j] = dG_l / dv_j.
std::vector<std::vector<double>> jacobian_G(const ModelParams& p, const LogRatioVector& v);

/// Linear-stability label from the eigenvalue moduli of the Jacobian, with a
/// neutral band |lambda| in [1-eps, 1+eps], eps = 1e-8:
///  - no neutral moduli: all < 1 attractor, all > 1 repeller, mixed saddle;
///  - neutral moduli present, none contracting: repeller (nothing is pulled
///    in; the tangency at theta = q+1 lands here);
///  - neutral and contracting but none expanding: marginal (the merged
///    branch at theta = theta_m);
///  - neutral with both contracting and expanding: saddle.
enum class Stability { attractor, saddle, repeller, marginal };
std::string stability_name(Stability s);

struct FixedPointInfo {
    LogRatioVector point;
    double residual = 0.0;        ///< sup-norm of G(point) - point
    std::vector<double> moduli;   ///< eigenvalue moduli, descending
    double spectral_radius = 0.0;
    Stability stability = Stability::attractor;
};

/// Classifies a fixed point of G; rejects points whose residual exceeds 1e-8.
FixedPointInfo classify_fixed_point(const ModelParams& p, const LogRatioVector& v);

/// Every constant boundary law at (q, theta), classified.  Order matches the
/// catalogue enumeration (free measure first, then class size ascending, low
/// branch before high, supports lexicographic); row indices label limits in
/// field_sample output.
std::vector<FixedPointInfo> find_all_fixed_points(const ModelParams& p);

/// Rectangular grid of iteration starts in the first two coordinates (all
/// remaining coordinates start at zero).
struct FieldGrid {
    double v1_min = -4.0, v1_max = 4.0;
    double v2_min = -4.0, v2_max = 4.0;
    int n1 = 41, n2 = 41;
};

struct FieldSample {
    double v1_start = 0.0, v2_start = 0.0;
    double dv1 = 0.0, dv2 = 0.0;  ///< one-step displacement G(v) - v
    int limit_id = -1;            ///< row in find_all_fixed_points, -1 if unresolved
    double limit_x = 0.0, limit_y = 0.0;
};

/// Direction field plus iterate-to-limit endpoint for every grid start, in
/// row-major (v1 outer, v2 inner) order.  Endpoints match a known fixed
/// point within 1e-6 sup-norm or are reported unresolved (limit_id = -1,
/// limit coordinates = final iterate).
std::vector<FieldSample> field_sample(const ModelParams& p, const FieldGrid& grid,
                                      long long n_steps = 10000);

}  // namespace potts
