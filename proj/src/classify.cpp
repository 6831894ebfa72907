#include "potts/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace potts {

namespace {

constexpr double kThetaTol = 1e-9;
constexpr double kTieTol = 1e-12;

int sign_with_tol(double x) { return x > kTieTol ? 1 : (x < -kTieTol ? -1 : 0); }

void check_qm_range(int q, int m) {
    if (m < 1 || m > q / 2)
        throw std::invalid_argument("class size m = " + std::to_string(m) +
                                    " outside 1..floor(q/2) for q = " + std::to_string(q));
}

double sup_dist(const LogRatioVector& a, const LogRatioVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

int BSetMembership::rel1_or_throw() const {
    if (!rel1)
        throw std::domain_error(
            "the h1-threshold classes are undefined below theta_m (no low branch exists)");
    return *rel1;
}

BSetMembership bset_membership(const ModelParams& p, const SuccessorProfile& profile, int m) {
    p.validate();
    p.require_classifiable();
    profile.validate(p);
    if (!profile.strict(p.k))
        throw std::invalid_argument("membership tests need a strict profile (counts summing to k)");
    check_qm_range(p.q, m);

    BSetMembership out;
    out.m = m;
    out.in_Bm = true;
    for (int l = 1; l < m; ++l)
        if (profile.c[l] != profile.c[0]) out.in_Bm = false;
    for (int l = m + 1; l < p.q; ++l)
        if (profile.c[l] != profile.c[m]) out.in_Bm = false;

    const double delta = p.J * (profile.c.front() - profile.c.back());
    out.rel0 = sign_with_tol(delta);
    if (p.theta >= theta_crit(p.q, m) - kThetaTol) {
        const auto branches = solve_branch(p.q, p.theta, m);
        const double h1 =
            branches.empty() ? std::log(static_cast<double>(p.q - m) / m) : branches.front().h;
        out.rel1 = sign_with_tol(delta - h1);
    }
    return out;
}

BoundaryClassification classify_boundary(const ModelParams& p, const SuccessorProfile& profile) {
    p.validate();
    p.require_classifiable();
    profile.validate(p);
    if (!profile.strict(p.k))
        throw std::invalid_argument("classifier needs a strict profile (counts summing to k)");

    // Split colours into the (at most two) classes of equal count.
    std::vector<int> values;
    for (int v : profile.c)
        if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    if (values.size() > 2)
        throw std::domain_error(
            "profile takes three or more distinct counts; outside the two-block classifier - "
            "use the empirical trajectory instead");

    std::vector<int> first_class, second_class;
    if (values.size() == 1) {
        first_class.push_back(1);
        for (int l = 2; l <= p.q; ++l) second_class.push_back(l);
    } else {
        int a = values[0], b = values[1];
        std::vector<int> ca, cb;
        for (int l = 1; l <= p.q; ++l) (profile.c[l - 1] == a ? ca : cb).push_back(l);
        // Leading block: the smaller class; equal sizes put the larger count first.
        const bool a_first =
            ca.size() != cb.size() ? ca.size() < cb.size() : a > b;
        first_class = a_first ? ca : cb;
        second_class = a_first ? cb : ca;
    }
    const int m = static_cast<int>(first_class.size());
    const double delta =
        p.J * (profile.c[first_class.front() - 1] - profile.c[second_class.back() - 1]);

    TisgmDescriptor d = basin_predict(p, m, delta);

    BoundaryClassification out;
    out.m = m;
    out.small_class = first_class;

    // Map the normal-form support back to the original colours.
    if (d.m > 0) {
        const bool on_first_block = d.support.front() <= m;
        std::vector<int> mapped;
        if (on_first_block) {
            for (int l : d.support) mapped.push_back(first_class[l - 1]);
            out.mu_index = d.branch == BranchKind::high ? 2 : 1;
        } else {
            for (int l : d.support) mapped.push_back(second_class[l - m - 1]);
            out.mu_index = 1;  // complement form of the low branch
        }
        std::sort(mapped.begin(), mapped.end());
        d.support = std::move(mapped);
    } else {
        out.mu_index = 0;
    }
    out.measure = std::move(d);

    const double tm = theta_crit(p.q, m);
    if (std::abs(p.theta - tm) <= kThetaTol)
        out.case_label = "theta=theta_m";
    else if (p.theta < tm)
        out.case_label = "theta<theta_m";
    else if (std::abs(p.theta - (p.q + 1.0)) <= kThetaTol)
        out.case_label = "theta=theta_c";
    else if (p.theta < p.q + 1.0)
        out.case_label = "theta_m<theta<theta_c";
    else
        out.case_label = "theta>theta_c";
    return out;
}

std::vector<SuccessorProfile> feasible_profiles(const ModelParams& p, int m) {
    p.validate();
    if (m < 1 || m >= p.q)
        throw std::invalid_argument("class size m must lie in 1..q-1");
    std::vector<SuccessorProfile> out;
    for (int b = 0; (p.q - m) * b <= p.k; ++b) {
        const int rest = p.k - (p.q - m) * b;
        if (rest % m != 0) continue;
        const int a = rest / m;
        SuccessorProfile prof;
        prof.c.assign(p.q, b);
        for (int l = 0; l < m; ++l) prof.c[l] = a;
        out.push_back(std::move(prof));
    }
    return out;
}

QmCondition qm_condition(int q, int m) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    check_qm_range(q, m);
    QmCondition out;
    const double s = std::sqrt(static_cast<double>(m) * m + 1.0);
    out.lower = 2.0 * m * s * (s - m);
    out.upper = 2.0 * m * s * (s + m);
    out.holds = out.lower <= q && q <= out.upper;
    out.direct =
        std::log(theta_crit(q, m)) >= std::log(static_cast<double>(q - m) / m);
    if (out.holds != out.direct)
        throw std::logic_error("interval form and direct inequality disagree for q=" +
                               std::to_string(q) + ", m=" + std::to_string(m));
    return out;
}

std::vector<double> solve_theta_star(int q, int m) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    check_qm_range(q, m);
    const double tm = theta_crit(q, m);
    const double tc = q + 1.0;
    if (tc - tm <= 0.0) return {};  // even q, m = q/2: the interval is empty

    auto g = [&](double theta) {
        const auto branches = solve_branch(q, theta, m);
        const double h1 =
            branches.empty() ? std::log(static_cast<double>(q - m) / m) : branches.front().h;
        return std::log(theta) - h1;
    };
    // Left endpoint analytically: h1(theta_m) = ln((q-m)/m).
    auto g_at = [&](int i, int N) {
        if (i == 0) return std::log(tm) - std::log(static_cast<double>(q - m) / m);
        return g(tm + (tc - tm) * i / N);
    };

    std::vector<double> roots;
    const int N = 10000;
    double prev = g_at(0, N);
    for (int i = 1; i <= N; ++i) {
        const double cur = g_at(i, N);
        if (prev == 0.0) {
            roots.push_back(tm + (tc - tm) * (i - 1) / N);
        } else if (cur != 0.0 && std::signbit(prev) != std::signbit(cur)) {
            double a = tm + (tc - tm) * (i - 1) / N;
            double b = tm + (tc - tm) * i / N;
            double ga = i == 1 ? g(a) : prev;  // re-evaluate off the analytic endpoint
            if (ga == 0.0 || std::signbit(ga) == std::signbit(cur)) {
                a = std::nextafter(a, b);
                ga = g(a);
            }
            for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
                const double mid = 0.5 * (a + b);
                const double gm = g(mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(gm) == std::signbit(ga)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    return roots;
}

EmpiricalResult empirical_classify(const ModelParams& p, const SuccessorRule& rule, int n_max,
                                   double tol) {
    p.validate();
    if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
    return match_trajectory(p, ratio_trajectory(p, rule, n_max), tol);
}

EmpiricalResult match_trajectory(const ModelParams& p, const std::vector<TrajectoryPoint>& traj,
                                 double tol) {
    p.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (traj.empty()) throw std::invalid_argument("empty trajectory");

    std::vector<TisgmDescriptor> candidates;
    if (p.theta > 1.0 + kTieTol) {
        candidates = enumerate_tisgms(p.q, p.theta).descriptors;
    } else {
        TisgmDescriptor free;
        free.q = p.q;
        free.theta = p.theta;
        candidates.push_back(free);
    }

    EmpiricalResult out;
    out.n_reached = traj.back().n;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double diff = sup_dist(traj[i].y, traj[i - 1].y);
        out.final_diff = diff;
        out.n_reached = traj[i].n;
        if (diff < tol) {
            for (const auto& cand : candidates) {
                const double dist = sup_dist(traj[i].y, cand.log_ratio_vector());
                if (dist < 1e-6) {
                    out.resolved = true;
                    out.descriptor = cand;
                    out.match_distance = dist;
                    out.final_y = traj[i].y;
                    return out;
                }
            }
        }
    }
    out.final_y = traj.back().y;
    return out;
}

}  // namespace potts
