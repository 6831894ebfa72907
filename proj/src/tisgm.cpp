#include "potts/tisgm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace potts {

namespace {

void check_qm(int q, int m, bool half_only) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    const int hi = half_only ? q / 2 : q - 1;
    if (m < 1 || m > hi)
        throw std::invalid_argument("class size m = " + std::to_string(m) + " outside 1.." +
                                    std::to_string(hi) + " for q = " + std::to_string(q));
}

long long binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    long long acc = 1;
    for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
}

/// All size-m subsets of 1..q in lexicographic order.
std::vector<std::vector<int>> subsets(int q, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(m);
    for (int i = 0; i < m; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[i] == q - m + i + 1) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

constexpr double kThetaTol = 1e-9;   // regime comparisons on theta
constexpr double kDiscTol = 1e-12;   // discriminant clamping

}  // namespace

double theta_crit(int q, int m) {
    check_qm(q, m, /*half_only=*/false);
    return 1.0 + 2.0 * std::sqrt(static_cast<double>(m) * (q - m));
}

std::vector<Branch> solve_branch(int q, double theta, int m) {
    check_qm(q, m, /*half_only=*/true);
    if (!(theta > 1.0)) throw std::domain_error("branches need theta > 1");
    const double disc = (theta - 1.0) * (theta - 1.0) - 4.0 * m * (q - m);
    std::vector<Branch> out;
    if (std::abs(disc) < kDiscTol) {
        const double x = (theta - 1.0) / (2.0 * m);
        out.push_back({x, 2.0 * std::log(x)});
        return out;
    }
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    const double x2 = (theta - 1.0 + s) / (2.0 * m);
    const double x1 = static_cast<double>(q - m) / (static_cast<double>(m) * x2);
    out.push_back({x1, 2.0 * std::log(x1)});
    out.push_back({x2, 2.0 * std::log(x2)});
    return out;
}

double fm(int q, double theta, int m, int k, double h) {
    check_qm(q, m, /*half_only=*/false);
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    // Factor out e^h for h > 0 so the quotient never overflows.
    const double a = theta + m - 1.0, b = static_cast<double>(q - m);
    const double c = static_cast<double>(m), d = q - m - 1.0 + theta;
    if (h > 0.0) {
        const double e = std::exp(-h);
        return k * std::log((a + b * e) / (c + d * e));
    }
    const double e = std::exp(h);
    return k * std::log((a * e + b) / (c * e + d));
}

double fm_derivative(int q, double theta, int m, int k, double h) {
    check_qm(q, m, /*half_only=*/false);
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const double a = theta + m - 1.0, b = static_cast<double>(q - m);
    const double c = static_cast<double>(m), d = q - m - 1.0 + theta;
    const double num = k * (theta - 1.0) * (theta + q - 1.0);
    if (h > 0.0) {
        const double e = std::exp(-h);
        return num * e / ((c + d * e) * (a + b * e));
    }
    const double e = std::exp(h);
    return num * e / ((c * e + d) * (a * e + b));
}

std::vector<double> fixed_points_numeric(int q, double theta, int m, int k) {
    check_qm(q, m, /*half_only=*/false);
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
    const double lo = k * std::log(static_cast<double>(q - m) / (q + theta - m - 1.0)) - 1.0;
    const double hi = k * std::log((theta + m - 1.0) / m) + 1.0;
    auto g = [&](double h) { return fm(q, theta, m, k, h) - h; };

    std::vector<double> roots{0.0};  // f_m(0) = 0 identically
    const int N = 20000;
    double prev_h = lo, prev_g = g(lo);
    for (int i = 1; i <= N; ++i) {
        const double h = lo + (hi - lo) * i / N;
        const double gh = g(h);
        if (prev_g == 0.0) {
            roots.push_back(prev_h);
        } else if (gh != 0.0 && std::signbit(prev_g) != std::signbit(gh)) {
            double a = prev_h, b = h, ga = prev_g;
            while (b - a > 1e-12) {
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
        prev_h = h;
        prev_g = gh;
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> uniq;
    for (double r : roots)
        if (uniq.empty() || std::abs(r - uniq.back()) > 1e-9) uniq.push_back(r);
    return uniq;
}

std::string branch_name(BranchKind b) {
    switch (b) {
        case BranchKind::zero: return "zero";
        case BranchKind::low: return "low";
        case BranchKind::high: return "high";
    }
    throw std::logic_error("unknown branch kind");
}

std::vector<double> TisgmDescriptor::log_ratio_vector() const {
    std::vector<double> y(q - 1, 0.0);
    if (m == 0) return y;
    const bool has_q = std::binary_search(support.begin(), support.end(), q);
    if (!has_q) {
        for (int l : support) y[l - 1] = h;
    } else {
        // Boundary law x^2 on the support; renormalizing on colour q flips
        // the pattern: -h on the complement, 0 on the support.
        std::vector<char> in(q + 1, 0);
        for (int l : support) in[l] = 1;
        for (int l = 1; l < q; ++l)
            if (!in[l]) y[l - 1] = -h;
    }
    return y;
}

std::string TisgmDescriptor::to_json() const {
    nlohmann::json j;
    j["q"] = q;
    j["theta"] = theta;
    j["m"] = m;
    j["branch"] = branch_name(branch);
    j["support"] = support;
    j["h"] = h;
    return j.dump();
}

RegimeReport enumerate_tisgms(int q, double theta) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (!(theta > 1.0))
        throw std::domain_error("the catalogue is built for theta > 1 (ferromagnetic coupling)");

    RegimeReport rep;
    rep.q = q;
    rep.theta = theta;

    TisgmDescriptor free;
    free.q = q;
    free.theta = theta;
    rep.descriptors.push_back(free);
    rep.multiplicity[{0, BranchKind::zero}] = 1;

    const int mmax = q / 2;
    for (int m = 1; m <= mmax; ++m) {
        const auto branches = solve_branch(q, theta, m);
        if (branches.empty()) continue;
        const bool merged = branches.size() == 1;
        for (std::size_t bi = 0; bi < branches.size(); ++bi) {
            const Branch& br = branches[bi];
            const BranchKind kind = (merged || bi == 0) ? BranchKind::low : BranchKind::high;
            // h = 0 is the free measure again (the low branch at theta = q+1).
            if (std::abs(br.x - 1.0) <= kDiscTol) continue;
            // For even q at m = q/2 the roots pair up across complements
            // (x1 x2 = 1): keep the high branch only.
            if (2 * m == q && kind == BranchKind::low) continue;
            long long count = 0;
            for (auto& sup : subsets(q, m)) {
                TisgmDescriptor d;
                d.q = q;
                d.theta = theta;
                d.m = m;
                d.branch = kind;
                d.support = sup;
                d.h = br.h;
                rep.descriptors.push_back(std::move(d));
                ++count;
            }
            rep.multiplicity[{m, kind}] = count;
        }
    }
    rep.total = static_cast<long long>(rep.descriptors.size());
    rep.regime = regime_label(q, theta);
    return rep;
}

std::string regime_label(int q, double theta) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (!(theta > 1.0)) throw std::domain_error("regimes are defined for theta > 1");
    const int mmax = q / 2;
    if (std::abs(theta - (q + 1.0)) <= kThetaTol) return "at_theta_c";
    for (int m = 1; m <= mmax; ++m)
        if (std::abs(theta - theta_crit(q, m)) <= kThetaTol) return "at_theta_m";
    if (theta < theta_crit(q, 1)) return "unique";
    if (theta > theta_crit(q, mmax)) return "generic";
    return "ladder";
}

long long count_tisgms(int q, double theta) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (!(theta > 1.0))
        throw std::domain_error("the catalogue is built for theta > 1 (ferromagnetic coupling)");
    const int mmax = q / 2;

    if (std::abs(theta - (q + 1.0)) <= kThetaTol) {
        if (q % 2 == 1) return 1LL << (q - 1);
        return (1LL << (q - 1)) - binom(q - 1, q / 2);
    }
    for (int m = 1; m <= mmax; ++m) {
        if (std::abs(theta - theta_crit(q, m)) <= kThetaTol) {
            long long acc = 1 + binom(q, m);
            for (int s = 1; s < m; ++s) acc += 2 * binom(q, s);
            return acc;
        }
    }
    if (theta < theta_crit(q, 1)) return 1;
    if (theta > theta_crit(q, mmax)) return (1LL << q) - 1;
    for (int m = 1; m < mmax; ++m) {
        if (theta_crit(q, m) < theta && theta < theta_crit(q, m + 1)) {
            long long acc = 1;
            for (int s = 1; s <= m; ++s) acc += 2 * binom(q, s);
            return acc;
        }
    }
    throw std::logic_error("theta fell between regimes; should be unreachable");
}

}  // namespace potts
