#include "potts/exactrec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace potts {

namespace {

/// Log-sum-exp over a vector of log-weights.
double log_sum_exp(const std::vector<double>& logw) {
    double M = -std::numeric_limits<double>::infinity();
    for (double w : logw) M = std::max(M, w);
    double s = 0.0;
    for (double w : logw) s += std::exp(w - M);
    return M + std::log(s);
}

}  // namespace

double energy(const ModelParams& p, const std::vector<VertexAddr>& region,
              const Configuration& sigma, const Configuration& omega) {
    p.validate();
    std::set<VertexAddr> inside(region.begin(), region.end());
    long long mono = 0;
    for (const auto& v : region) {
        const Color cv = sigma.at(v);
        if (cv < 1 || cv > p.q)
            throw std::invalid_argument("colour outside 1..q at vertex " + v.str());
        if (!v.is_root()) {
            const VertexAddr par = v.parent();
            if (inside.count(par)) {
                // inner edge, counted once at the child end
                if (sigma.at(par) == cv) ++mono;
            } else {
                if (omega.at(par) == cv) ++mono;
            }
        }
        for (const auto& c : direct_successors(p, v)) {
            if (!inside.count(c)) {
                if (omega.at(c) == cv) ++mono;
            }
        }
    }
    return -p.J * static_cast<double>(mono);
}

BruteForceTable brute_force_distribution(const ModelParams& p, int n, const Configuration& omega,
                                         std::uint64_t state_cap) {
    p.validate();
    if (n < 0) throw std::invalid_argument("volume radius must be >= 0");

    BruteForceTable t;
    t.q = p.q;
    t.order = ball(p, n);
    const std::size_t B = t.order.size();

    // q^B with overflow guard against the cap.
    std::uint64_t nstates = 1;
    for (std::size_t i = 0; i < B; ++i) {
        if (nstates > state_cap / static_cast<std::uint64_t>(p.q))
            throw std::invalid_argument("enumeration of " + std::to_string(p.q) + "^" +
                                        std::to_string(B) + " states exceeds the cap of " +
                                        std::to_string(state_cap));
        nstates *= static_cast<std::uint64_t>(p.q);
    }
    if (nstates > state_cap)
        throw std::invalid_argument("enumeration of " + std::to_string(nstates) +
                                    " states exceeds the cap of " + std::to_string(state_cap));

    // Position lookup and the edge structure of V_n with boundary sphere(n+1).
    std::map<VertexAddr, int> pos;
    for (std::size_t i = 0; i < B; ++i) pos[t.order[i]] = static_cast<int>(i);

    std::vector<std::pair<int, int>> inner;  // (parent position, child position)
    std::vector<std::vector<Color>> bnd(B);  // boundary successor colours per position
    for (std::size_t i = 0; i < B; ++i) {
        const auto& v = t.order[i];
        for (const auto& c : direct_successors(p, v)) {
            auto it = pos.find(c);
            if (it != pos.end())
                inner.emplace_back(static_cast<int>(i), it->second);
            else
                bnd[i].push_back(omega.at(c));
        }
    }

    // Enumerate all states, collect log-weights, normalize in log domain.
    std::vector<int> digit(B, 0);  // digit[i] = colour-1 at order[i]
    std::vector<double> logw(nstates);
    for (std::uint64_t s = 0;; ++s) {
        long long mono = 0;
        for (const auto& [a, b] : inner)
            if (digit[a] == digit[b]) ++mono;
        for (std::size_t i = 0; i < B; ++i) {
            const int ci = digit[i] + 1;
            for (Color w : bnd[i])
                if (w == ci) ++mono;
        }
        logw[s] = p.J * static_cast<double>(mono);  // = -E
        // odometer step, least significant digit first
        std::size_t d = 0;
        while (d < B && ++digit[d] == p.q) digit[d++] = 0;
        if (d == B) break;
    }
    const double lse = log_sum_exp(logw);
    t.prob.resize(nstates);
    for (std::uint64_t s = 0; s < nstates; ++s) t.prob[s] = std::exp(logw[s] - lse);
    return t;
}

double BruteForceTable::prob_of(const Configuration& sigma) const {
    std::uint64_t idx = 0, stride = 1;
    for (const auto& v : order) {
        const Color c = sigma.at(v);
        if (c < 1 || c > q) throw std::invalid_argument("colour outside 1..q at vertex " + v.str());
        idx += stride * static_cast<std::uint64_t>(c - 1);
        stride *= static_cast<std::uint64_t>(q);
    }
    return prob[idx];
}

std::vector<double> BruteForceTable::marginal(const VertexAddr& v) const {
    std::uint64_t stride = 1;
    bool found = false;
    for (const auto& u : order) {
        if (u == v) {
            found = true;
            break;
        }
        stride *= static_cast<std::uint64_t>(q);
    }
    if (!found) throw std::out_of_range("vertex " + v.str() + " not in the enumerated volume");
    std::vector<double> m(q, 0.0);
    for (std::uint64_t s = 0; s < prob.size(); ++s)
        m[(s / stride) % static_cast<std::uint64_t>(q)] += prob[s];
    return m;
}

double BruteForceTable::cylinder_mass(const Configuration& eta) const {
    // constraints as (stride, wanted digit) pairs over the fixed vertices
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cons;
    std::uint64_t stride = 1;
    std::size_t matched = 0;
    for (const auto& v : order) {
        if (eta.contains(v)) {
            const Color c = eta.at(v);
            if (c < 1 || c > q)
                throw std::invalid_argument("colour outside 1..q at vertex " + v.str());
            cons.emplace_back(stride, static_cast<std::uint64_t>(c - 1));
            ++matched;
        }
        stride *= static_cast<std::uint64_t>(q);
    }
    if (matched != eta.size())
        throw std::invalid_argument("cylinder configuration mentions vertices outside the volume");
    double mass = 0.0;
    for (std::uint64_t s = 0; s < prob.size(); ++s) {
        bool ok = true;
        for (const auto& [st, want] : cons)
            if ((s / st) % static_cast<std::uint64_t>(q) != want) {
                ok = false;
                break;
            }
        if (ok) mass += prob[s];
    }
    return mass;
}

std::string BruteForceTable::to_json() const {
    nlohmann::json j;
    j["q"] = q;
    nlohmann::json probs = nlohmann::json::object();
    std::vector<int> digit(order.size(), 0);
    for (std::uint64_t s = 0; s < prob.size(); ++s) {
        std::string key;
        for (std::size_t i = 0; i < digit.size(); ++i) {
            if (i) key += ',';
            key += std::to_string(digit[i] + 1);
        }
        probs[key] = prob[s];
        std::size_t d = 0;
        while (d < digit.size() && ++digit[d] == q) digit[d++] = 0;
    }
    nlohmann::json ord = nlohmann::json::array();
    for (const auto& v : order) ord.push_back(v.str());
    j["order"] = ord;
    j["prob"] = probs;
    return j.dump();
}

LogRatioVector transfer(const ModelParams& p, const LogRatioVector& y) {
    if (static_cast<int>(y.size()) != p.q - 1)
        throw std::invalid_argument("log-ratio vector has " + std::to_string(y.size()) +
                                    " entries, expected q-1 = " + std::to_string(p.q - 1));
    // Scale all exponentials by e^{-M}, M = max(0, max_l y_l), so nothing overflows.
    double M = 0.0;
    for (double v : y) M = std::max(M, v);
    const double e0 = std::exp(-M);  // colour q's e^{0-M}
    double T = 0.0;                  // sum over l < q of e^{y_l - M}
    std::vector<double> ey(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        ey[i] = std::exp(y[i] - M);
        T += ey[i];
    }
    // F_l = ln(num_l / den) with num_l - den = (theta - 1)(e^{y_l} - 1); the
    // log1p form keeps exact zeros exact, so the equal-block invariant lines
    // of the induced map hold bitwise, not just to rounding.
    const double den = p.theta * e0 + T;
    LogRatioVector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = std::log1p((p.theta - 1.0) * (ey[i] - e0) / den);
    return out;
}

LevelRatios base_log_ratios(const ModelParams& p, int n, const Configuration& omega) {
    p.validate();
    if (n < 1) throw std::invalid_argument("base ratios need depth >= 1");
    LevelRatios L;
    L.depth = n;
    const auto verts = sphere(p, n);
    L.values.reserve(verts.size());
    for (const auto& s : verts) {
        std::vector<int> cnt(p.q, 0);
        for (const auto& u : direct_successors(p, s)) {
            const Color c = omega.at(u);
            if (c < 1 || c > p.q)
                throw std::invalid_argument("colour outside 1..q at vertex " + u.str());
            ++cnt[c - 1];
        }
        LogRatioVector y(p.q - 1);
        for (int l = 1; l < p.q; ++l) y[l - 1] = p.J * (cnt[l - 1] - cnt[p.q - 1]);
        L.values.push_back(std::move(y));
    }
    return L;
}

LevelRatios lift_ratios(const ModelParams& p, const LevelRatios& lower) {
    p.validate();
    if (lower.depth < 2)
        throw std::invalid_argument("cannot lift to depth " + std::to_string(lower.depth - 1) +
                                    "; the root level is handled by the marginal combination");
    if (lower.values.size() != sphere_size(p, lower.depth))
        throw std::invalid_argument("level ratio count does not match the sphere size");
    LevelRatios up;
    up.depth = lower.depth - 1;
    const std::size_t parents = static_cast<std::size_t>(sphere_size(p, up.depth));
    up.values.assign(parents, LogRatioVector(p.q - 1, 0.0));
    for (std::size_t j = 0; j < parents; ++j) {
        for (int i = 0; i < p.k; ++i) {
            const LogRatioVector f = transfer(p, lower.values[j * p.k + i]);
            for (int l = 0; l < p.q - 1; ++l) up.values[j][l] += f[l];
        }
    }
    return up;
}

std::vector<double> root_marginal(const ModelParams& p, int n, const Configuration& omega) {
    p.validate();
    if (n < 1) throw std::invalid_argument("root marginal needs volume radius >= 1");
    LevelRatios L = base_log_ratios(p, n, omega);
    while (L.depth > 1) L = lift_ratios(p, L);
    // ln of the root weight ratios; colour q gets 0
    std::vector<double> lnr(p.q, 0.0);
    for (const auto& child : L.values) {
        const LogRatioVector f = transfer(p, child);
        for (int l = 0; l < p.q - 1; ++l) lnr[l] += f[l];
    }
    const double lse = log_sum_exp(lnr);
    for (double& v : lnr) v = std::exp(v - lse);
    return lnr;
}

double cylinder_probability(const ModelParams& p, int n, const Configuration& omega,
                            const CylinderQuery& query, std::uint64_t state_cap) {
    p.validate();
    if (query.m < 1) throw std::invalid_argument("cylinder depth must be >= 1");
    if (query.m >= n)
        throw std::invalid_argument("cylinder depth m = " + std::to_string(query.m) +
                                    " must be smaller than the volume radius n = " +
                                    std::to_string(n));

    const auto inner = ball(p, query.m);
    validate_configuration(p, query.eta, inner);

    std::uint64_t nstates = 1;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (nstates > state_cap / static_cast<std::uint64_t>(p.q))
            throw std::invalid_argument("cylinder enumeration exceeds the state cap");
        nstates *= static_cast<std::uint64_t>(p.q);
    }

    LevelRatios L = base_log_ratios(p, n, omega);
    while (L.depth > query.m) L = lift_ratios(p, L);

    // Edge list of V_m and, for each depth-m vertex, its index into L.values.
    // The ball is in lexicographic order, so its depth-m subsequence is the
    // sphere in lexicographic order.
    std::map<VertexAddr, int> pos;
    for (std::size_t i = 0; i < inner.size(); ++i) pos[inner[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> level_index(inner.size(), -1);
    int sphere_counter = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        const auto& v = inner[i];
        if (!v.is_root()) edges.emplace_back(pos[v.parent()], static_cast<int>(i));
        if (v.depth() == query.m) level_index[i] = sphere_counter++;
    }

    std::vector<int> digit(inner.size(), 0);
    std::vector<double> logw(nstates);
    std::uint64_t target = 0;
    {
        std::uint64_t stride = 1;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            target += stride * static_cast<std::uint64_t>(query.eta.at(inner[i]) - 1);
            stride *= static_cast<std::uint64_t>(p.q);
        }
    }
    for (std::uint64_t s = 0;; ++s) {
        long long mono = 0;
        for (const auto& [a, b] : edges)
            if (digit[a] == digit[b]) ++mono;
        double w = p.J * static_cast<double>(mono);
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (level_index[i] >= 0 && digit[i] + 1 < p.q)
                w += L.values[level_index[i]][digit[i]];  // Y^q = 0 needs no term
        }
        logw[s] = w;
        std::size_t d = 0;
        while (d < digit.size() && ++digit[d] == p.q) digit[d++] = 0;
        if (d == digit.size()) break;
    }
    return std::exp(logw[target] - log_sum_exp(logw));
}

std::vector<TrajectoryPoint> ratio_trajectory(const ModelParams& p, const SuccessorRule& rule,
                                              int n_max) {
    p.validate();
    if (n_max < 1) throw std::invalid_argument("trajectory length must be >= 1");
    if (n_max > 20000)
        throw std::invalid_argument("trajectory length too large for the per-level report");
    rule.validate(p);

    // Under a deterministic rule the subtree below a vertex is a function of
    // the vertex's own colour, so one vector per colour per height suffices.
    const auto levels = rule.reachable_colors(p, n_max);
    std::set<Color> universe{rule.root_color};
    for (const auto& lv : levels) universe.insert(lv.begin(), lv.end());

    // heights[j][a] = log-ratio vector of an a-coloured vertex whose subtree
    // has height j (j = 0: the boundary seed from the successor colours).
    std::vector<std::map<Color, LogRatioVector>> heights(n_max);
    for (Color a : universe) {
        std::vector<int> cnt(p.q, 0);
        for (Color b : rule.row(a)) ++cnt[b - 1];
        LogRatioVector y(p.q - 1);
        for (int l = 1; l < p.q; ++l) y[l - 1] = p.J * (cnt[l - 1] - cnt[p.q - 1]);
        heights[0][a] = std::move(y);
    }
    for (int j = 1; j < n_max; ++j) {
        for (Color a : universe) {
            LogRatioVector acc(p.q - 1, 0.0);
            for (Color b : rule.row(a)) {
                const LogRatioVector f = transfer(p, heights[j - 1][b]);
                for (int l = 0; l < p.q - 1; ++l) acc[l] += f[l];
            }
            heights[j][a] = std::move(acc);
        }
    }

    // Homogeneity of one level: all colours possible there carry one vector.
    // Distinct colour sets are few, so memoize per (height, set) pair.
    std::vector<std::vector<Color>> distinct_sets;
    std::vector<int> set_id(n_max);
    for (int d = 1; d <= n_max; ++d) {
        const auto& s = levels[d - 1];
        int id = -1;
        for (std::size_t i = 0; i < distinct_sets.size(); ++i)
            if (distinct_sets[i] == s) {
                id = static_cast<int>(i);
                break;
            }
        if (id < 0) {
            id = static_cast<int>(distinct_sets.size());
            distinct_sets.push_back(s);
        }
        set_id[d - 1] = id;
    }
    std::vector<std::vector<signed char>> memo(distinct_sets.size(),
                                               std::vector<signed char>(n_max, -1));
    auto level_ok = [&](int j, int id) -> bool {
        signed char& m = memo[id][j];
        if (m >= 0) return m != 0;
        const auto& colors = distinct_sets[id];
        bool ok = true;
        for (std::size_t i = 1; ok && i < colors.size(); ++i) {
            const auto& a = heights[j].at(colors[0]);
            const auto& b = heights[j].at(colors[i]);
            for (int l = 0; l < p.q - 1; ++l)
                if (std::abs(a[l] - b[l]) > 1e-9) {
                    ok = false;
                    break;
                }
        }
        m = ok ? 1 : 0;
        return ok;
    };

    const Color designated = rule.row(rule.root_color)[0];
    std::vector<TrajectoryPoint> out;
    out.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        TrajectoryPoint tp;
        tp.n = n;
        tp.y = heights[n - 1].at(designated);
        tp.homogeneous = true;
        for (int d = 1; d <= n && tp.homogeneous; ++d)
            tp.homogeneous = level_ok(n - d, set_id[d - 1]);
        out.push_back(std::move(tp));
    }
    return out;
}

std::map<Color, std::uint64_t> color_census(const ModelParams& p, int n, int i,
                                            const Configuration& sigma) {
    p.validate();
    if (n < 1) throw std::invalid_argument("census radius must be >= 1");
    if (i < 1 || i > p.k + 1)
        throw std::invalid_argument("subtree index " + std::to_string(i) + " outside 1.." +
                                    std::to_string(p.k + 1));
    std::map<Color, std::uint64_t> cnt;
    for (const auto& v : sphere(p, n)) {
        if (v.path[0] != i) continue;
        const Color c = sigma.at(v);
        if (c < 1 || c > p.q)
            throw std::invalid_argument("colour outside 1..q at vertex " + v.str());
        ++cnt[c];
    }
    return cnt;
}

}  // namespace potts
