#include "potts/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace potts {

namespace {

constexpr double kThetaTol = 1e-9;    // regime comparisons on theta
constexpr double kTieTol = 1e-12;     // ties on the starting height
constexpr double kNeutralBand = 1e-8; // |lambda| within this of 1 is neutral

double sup_diff(const LogRatioVector& a, const LogRatioVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

LogRatioVector step_G(const ModelParams& p, const LogRatioVector& v) {
    LogRatioVector out = transfer(p, v);
    for (double& x : out) x *= p.k;
    return out;
}

IterateResult iterate(const ModelParams& p, const LogRatioVector& v0, double tol,
                      long long max_iter) {
    p.validate();
    if (v0.size() != static_cast<std::size_t>(p.q - 1))
        throw std::invalid_argument("start vector must have q-1 components");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    IterateResult r;
    r.prev = v0;
    r.v = v0;
    for (long long n = 1; n <= max_iter; ++n) {
        LogRatioVector next = step_G(p, r.v);
        r.final_diff = sup_diff(next, r.v);
        r.prev = std::move(r.v);
        r.v = std::move(next);
        r.iterations = n;
        if (r.final_diff < tol) {
            r.converged = true;
            return r;
        }
    }
    r.converged = false;
    return r;
}

TisgmDescriptor basin_predict(const ModelParams& p, int m, double v0_first) {
    p.validate();
    p.require_classifiable();
    if (m < 1 || m > p.q / 2)
        throw std::invalid_argument("class size m = " + std::to_string(m) +
                                    " outside 1..floor(q/2) for q = " + std::to_string(p.q));
    const int q = p.q;
    const double theta = p.theta;
    const double tm = theta_crit(q, m);
    const double tc = q + 1.0;

    TisgmDescriptor free;
    free.q = q;
    free.theta = theta;

    auto canonical = [&](BranchKind kind, double h) {
        TisgmDescriptor d;
        d.q = q;
        d.theta = theta;
        d.m = m;
        d.branch = kind;
        d.h = h;
        if (2 * m == q && kind == BranchKind::low) {
            // Same measure as the high branch on the complementary colours.
            d.branch = BranchKind::high;
            d.h = -h;
            for (int l = m + 1; l <= q; ++l) d.support.push_back(l);
        } else {
            for (int l = 1; l <= m; ++l) d.support.push_back(l);
        }
        return d;
    };

    if (theta < tm - kThetaTol) return free;

    const auto branches = solve_branch(q, theta, m);

    if (std::abs(theta - tm) <= kThetaTol || branches.size() < 2) {
        // Merged (tangent) branch: attracts from above, releases to 0 below.
        double x, h;
        if (!branches.empty()) {
            x = branches.front().x;
            h = branches.front().h;
        } else {
            x = std::sqrt(static_cast<double>(q - m) / m);
            h = std::log(static_cast<double>(q - m) / m);
        }
        if (std::abs(x - 1.0) <= kTieTol) return free;  // theta_m = q+1 (even q, m = q/2)
        if (v0_first >= h - kTieTol) return canonical(BranchKind::low, h);
        return free;
    }

    const double h1 = branches.front().h;
    const double h2 = branches.back().h;

    if (theta < tc - kThetaTol) {
        if (v0_first > h1 + kTieTol) return canonical(BranchKind::high, h2);
        if (v0_first >= h1 - kTieTol) return canonical(BranchKind::low, h1);
        return free;
    }
    if (std::abs(theta - tc) <= kThetaTol) {
        if (v0_first > kTieTol) return canonical(BranchKind::high, h2);
        return free;
    }
    // theta > q+1: the origin keeps only its own ray.
    if (v0_first > kTieTol) return canonical(BranchKind::high, h2);
    if (v0_first < -kTieTol) return canonical(BranchKind::low, h1);
    return free;
}

std::vector<std::vector<double>> jacobian_G(const ModelParams& p, const LogRatioVector& v) {
    p.validate();
    const int d = p.q - 1;
    if (v.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("point must have q-1 components");
    const double theta = p.theta;
    double M = 0.0;
    for (double x : v) M = std::max(M, x);
    const double e0 = std::exp(-M);
    std::vector<double> e(d);
    double S = 0.0;
    for (int j = 0; j < d; ++j) {
        e[j] = std::exp(v[j] - M);
        S += e[j];
    }
    const double D = theta * e0 + S;  // denominator, scaled by e^{-M}
    std::vector<std::vector<double>> out(d, std::vector<double>(d, 0.0));
    for (int l = 0; l < d; ++l) {
        const double N = (theta - 1.0) * e[l] + S + e0;  // numerator, same scale
        for (int j = 0; j < d; ++j) {
            const double w = (l == j) ? theta : 1.0;  // (theta-1) delta_{lj} + 1
            out[l][j] = p.k * (w * e[j] / N - e[j] / D);
        }
    }
    return out;
}

std::string stability_name(Stability s) {
    switch (s) {
        case Stability::attractor: return "attractor";
        case Stability::saddle: return "saddle";
        case Stability::repeller: return "repeller";
        case Stability::marginal: return "marginal";
    }
    throw std::logic_error("unknown stability label");
}

FixedPointInfo classify_fixed_point(const ModelParams& p, const LogRatioVector& v) {
    p.validate();
    FixedPointInfo info;
    info.point = v;
    info.residual = sup_diff(step_G(p, v), v);
    if (info.residual > 1e-8)
        throw std::invalid_argument("not a fixed point: residual " + std::to_string(info.residual) +
                                    " exceeds 1e-8");
    const auto J = jacobian_G(p, v);
    const int d = p.q - 1;
    Eigen::MatrixXd A(d, d);
    for (int l = 0; l < d; ++l)
        for (int j = 0; j < d; ++j) A(l, j) = J[l][j];
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
    info.moduli.resize(d);
    for (int i = 0; i < d; ++i) info.moduli[i] = std::abs(ev[i]);
    std::sort(info.moduli.rbegin(), info.moduli.rend());
    info.spectral_radius = info.moduli.front();

    int lo = 0, hi = 0, mid = 0;
    for (double m : info.moduli) {
        if (m < 1.0 - kNeutralBand)
            ++lo;
        else if (m > 1.0 + kNeutralBand)
            ++hi;
        else
            ++mid;
    }
    if (mid == 0)
        info.stability = (lo > 0 && hi > 0)   ? Stability::saddle
                         : (hi == 0)          ? Stability::attractor
                                              : Stability::repeller;
    else if (lo == 0)
        info.stability = Stability::repeller;
    else if (hi == 0)
        info.stability = Stability::marginal;
    else
        info.stability = Stability::saddle;
    return info;
}

std::vector<FixedPointInfo> find_all_fixed_points(const ModelParams& p) {
    p.validate();
    p.require_classifiable();
    const RegimeReport rep = enumerate_tisgms(p.q, p.theta);
    std::vector<FixedPointInfo> out;
    out.reserve(rep.descriptors.size());
    for (const auto& d : rep.descriptors) out.push_back(classify_fixed_point(p, d.log_ratio_vector()));
    return out;
}

std::vector<FieldSample> field_sample(const ModelParams& p, const FieldGrid& grid,
                                      long long n_steps) {
    p.validate();
    p.require_classifiable();
    if (p.q < 3)
        throw std::invalid_argument("field sampling needs two log-ratio coordinates (q >= 3)");
    if (grid.n1 < 1 || grid.n2 < 1) throw std::invalid_argument("grid must have positive size");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be positive");

    const auto fixed = find_all_fixed_points(p);
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>(grid.n1) * grid.n2);
    for (int i1 = 0; i1 < grid.n1; ++i1) {
        const double v1 =
            grid.n1 == 1 ? grid.v1_min
                         : grid.v1_min + (grid.v1_max - grid.v1_min) * i1 / (grid.n1 - 1);
        for (int i2 = 0; i2 < grid.n2; ++i2) {
            const double v2 =
                grid.n2 == 1 ? grid.v2_min
                             : grid.v2_min + (grid.v2_max - grid.v2_min) * i2 / (grid.n2 - 1);
            LogRatioVector v(p.q - 1, 0.0);
            v[0] = v1;
            v[1] = v2;
            FieldSample s;
            s.v1_start = v1;
            s.v2_start = v2;
            const LogRatioVector g = step_G(p, v);
            s.dv1 = g[0] - v1;
            s.dv2 = g[1] - v2;
            const IterateResult r = iterate(p, v, 1e-9, n_steps);
            int best = -1;
            double best_d = 1e-6;
            for (std::size_t i = 0; i < fixed.size(); ++i) {
                const double d = sup_diff(r.v, fixed[i].point);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(i);
                }
            }
            if (best >= 0) {
                s.limit_id = best;
                s.limit_x = fixed[best].point[0];
                s.limit_y = fixed[best].point[1];
            } else {
                s.limit_id = -1;
                s.limit_x = r.v[0];
                s.limit_y = r.v[1];
            }
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace potts
