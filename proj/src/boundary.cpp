#include "potts/boundary.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace potts {

int SuccessorProfile::sum() const { return std::accumulate(c.begin(), c.end(), 0); }

void SuccessorProfile::validate(const ModelParams& p) const {
    if (static_cast<int>(c.size()) != p.q)
        throw std::invalid_argument("successor profile has " + std::to_string(c.size()) +
                                    " entries, expected q = " + std::to_string(p.q));
    for (int v : c)
        if (v < 0) throw std::invalid_argument("successor profile entries must be >= 0");
}

const std::vector<Color>& SuccessorRule::row(Color a) const {
    auto it = table.find(a);
    if (it == table.end())
        throw std::invalid_argument("successor rule has no row for colour " + std::to_string(a));
    return it->second;
}

void SuccessorRule::validate(const ModelParams& p) const {
    if (root_color < 1 || root_color > p.q)
        throw std::invalid_argument("rule root colour outside 1..q");
    // Walk the reachable colour set and demand a full-length row everywhere.
    std::set<Color> seen{root_color};
    std::vector<Color> todo{root_color};
    while (!todo.empty()) {
        Color a = todo.back();
        todo.pop_back();
        const auto& r = row(a);
        if (static_cast<int>(r.size()) != p.k)
            throw std::invalid_argument("rule row for colour " + std::to_string(a) + " has " +
                                        std::to_string(r.size()) + " entries, expected k = " +
                                        std::to_string(p.k));
        for (Color b : r) {
            if (b < 1 || b > p.q)
                throw std::invalid_argument("rule row for colour " + std::to_string(a) +
                                            " contains colour " + std::to_string(b) +
                                            " outside 1..q");
            if (seen.insert(b).second) todo.push_back(b);
        }
    }
}

std::vector<std::vector<Color>> SuccessorRule::reachable_colors(const ModelParams& p,
                                                                int depth) const {
    validate(p);
    std::vector<std::vector<Color>> levels;
    // Depth 1: the root's successors (the cyclic continuation adds no new colour).
    std::set<Color> cur(row(root_color).begin(), row(root_color).end());
    for (int d = 1; d <= depth; ++d) {
        levels.emplace_back(cur.begin(), cur.end());
        std::set<Color> next;
        for (Color a : cur) {
            const auto& r = row(a);
            next.insert(r.begin(), r.end());
        }
        cur = std::move(next);
    }
    return levels;
}

SuccessorRule figure_rule(const std::string& name) {
    SuccessorRule r;
    r.root_color = 1;
    if (name == "fig5") {
        // q=5: colours 1,2 never reproduce (successors avoid the parent colour),
        // colours 3,4,5 reproduce exactly once; colours 1,2 keep reappearing.
        r.table = {{1, {2, 3}}, {2, {4, 5}}, {3, {3, 1}}, {4, {4, 2}}, {5, {5, 1}}};
    } else if (name == "fig6") {
        // q=15: colours 1..3 reproduce once, colours >= 4 reproduce twice.  A
        // deterministic rule can only populate a chain of colours, so this is
        // the representative 1 -> 2 -> 3 -> 4 with 4 self-reproducing.
        r.table = {{1, {1, 2}}, {2, {2, 3}}, {3, {3, 4}}, {4, {4, 4}}};
        for (Color j = 5; j <= 15; ++j) r.table[j] = {j, j};
    } else if (name == "fig7") {
        // q=5: every vertex has one successor coloured 1 and one coloured 2 -
        // the strict rule with c = (1,1,0,0,0).
        for (Color a = 1; a <= 5; ++a) r.table[a] = {1, 2};
    } else if (name == "fig8") {
        // q=10: colours 1..4 reproduce once, colours 5..10 never.
        r.table = {{1, {1, 2}}, {2, {2, 3}}, {3, {3, 4}}, {4, {4, 5}}};
        for (Color j = 5; j <= 9; ++j) r.table[j] = {1, j + 1};
        r.table[10] = {1, 2};
    } else {
        throw std::invalid_argument("unknown figure rule '" + name +
                                    "' (expected fig5, fig6, fig7 or fig8)");
    }
    return r;
}

SuccessorRule rule_from_profile(const ModelParams& p, const SuccessorProfile& profile,
                                Color root_color) {
    profile.validate(p);
    if (!profile.strict(p.k))
        throw std::invalid_argument("profile sums to " + std::to_string(profile.sum()) +
                                    ", cannot be realized vertex-by-vertex with k = " +
                                    std::to_string(p.k));
    std::vector<Color> tuple;
    for (Color l = 1; l <= p.q; ++l)
        for (int i = 0; i < profile.c[l - 1]; ++i) tuple.push_back(l);
    SuccessorRule r;
    r.root_color = root_color;
    for (Color a = 1; a <= p.q; ++a) r.table[a] = tuple;
    return r;
}

Configuration generate_config(const ModelParams& p, const SuccessorRule& rule, int depth) {
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");
    rule.validate(p);
    Configuration omega;
    VertexAddr root;
    omega.set(root, rule.root_color);
    // Breadth-first assignment down to depth+1 (the boundary of V_depth).
    std::vector<VertexAddr> frontier{root};
    for (int d = 0; d <= depth; ++d) {
        std::vector<VertexAddr> next;
        for (const auto& v : frontier) {
            const auto& tuple = rule.row(omega.at(v));
            const int deg = v.is_root() ? p.k + 1 : p.k;
            for (int i = 1; i <= deg; ++i) {
                VertexAddr c = v.child(i);
                omega.set(c, tuple[(i - 1) % p.k]);  // root's extra successor wraps around
                next.push_back(c);
            }
        }
        frontier = std::move(next);
    }
    return omega;
}

CMeasurement measure_c_values(const ModelParams& p, const Configuration& omega, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    CMeasurement out;
    std::map<Color, int> diag;
    bool diag_ok = true;
    bool strict_ok = true;
    const std::vector<int>* ref = nullptr;

    for (int d = 1; d <= depth; ++d) {
        for (const auto& t : sphere(p, d)) {
            std::vector<int> counts(p.q, 0);
            for (const auto& u : direct_successors(p, t)) {
                const Color cu = omega.at(u);
                if (cu < 1 || cu > p.q)
                    throw std::invalid_argument("colour outside 1..q at vertex " + u.str());
                ++counts[cu - 1];
            }
            const Color ct = omega.at(t);
            const int self = counts[ct - 1];
            auto it = diag.find(ct);
            if (it == diag.end())
                diag[ct] = self;
            else if (it->second != self)
                diag_ok = false;
            auto ins = out.per_vertex.emplace(t, std::move(counts));
            if (ref == nullptr)
                ref = &ins.first->second;
            else if (*ref != ins.first->second)
                strict_ok = false;
        }
    }
    if (out.per_vertex.empty())
        throw std::invalid_argument("no non-root vertices measured; need depth >= 1");

    out.strict_constant = strict_ok;
    if (strict_ok && ref != nullptr) out.strict_c = *ref;
    out.diagonal_constant = diag_ok;
    if (diag_ok) out.diagonal = std::move(diag);
    return out;
}

std::vector<double> initial_Y(const ModelParams& p, const SuccessorProfile& profile) {
    profile.validate(p);
    if (!profile.strict(p.k))
        throw std::invalid_argument(
            "initial log-ratios are defined for strict profiles only (counts must sum to k)");
    std::vector<double> y(p.q - 1);
    for (int l = 1; l < p.q; ++l) y[l - 1] = p.J * (profile.c[l - 1] - profile.c[p.q - 1]);
    return y;
}

}  // namespace potts
