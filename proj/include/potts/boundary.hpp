#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "potts/model.hpp"

namespace potts {

/// Prescribed successor colour counts: c[l-1] is the number of l-coloured
/// direct successors every (non-root) vertex should have.  The profile is
/// "strict" when the counts sum to k, i.e. when it can actually be realized
/// at every vertex simultaneously.
struct SuccessorProfile {
    std::vector<int> c;

    int q() const { return static_cast<int>(c.size()); }
    int sum() const;
    bool strict(int k) const { return sum() == k; }
    void validate(const ModelParams& p) const;  // length q, entries >= 0
};

/// Deterministic generation rule: a vertex of colour a gives its k successors
/// the colours table[a] in order.  Only colours reachable from root_color need
/// a table row.
struct SuccessorRule {
    std::map<Color, std::vector<Color>> table;
    Color root_color = 1;

    const std::vector<Color>& row(Color a) const;  // throws if a has no row
    void validate(const ModelParams& p) const;     // rows reachable from the root are total, length k
    /// Colours that can occur at each depth 1..depth (index 0 = depth 1).
    std::vector<std::vector<Color>> reachable_colors(const ModelParams& p, int depth) const;
};

/// The four named boundary-condition rules used in the worked examples
/// (k = 2 throughout):
///   fig5 (q=5):  vertices coloured 1 or 2 have successors avoiding their own
///                colour; colours 3,4,5 reproduce exactly once.
///   fig6 (q=15): colours 1..3 reproduce exactly once, colours 4..15 twice.
///   fig7 (q=5):  every vertex has successors coloured {1,2} - the strict rule.
///   fig8 (q=10): colours 1..4 reproduce exactly once, colours 5..10 never.
SuccessorRule figure_rule(const std::string& name);

/// Realize a strict profile as a rule: every colour gets the same successor
/// tuple, listing colour l with multiplicity c[l-1].
SuccessorRule rule_from_profile(const ModelParams& p, const SuccessorProfile& profile,
                                Color root_color = 1);

/// Expand a rule into an explicit configuration on V_{depth+1} = V_depth plus
/// its boundary sphere.  The root's extra (k+1)-th successor continues the
/// tuple cyclically.
Configuration generate_config(const ModelParams& p, const SuccessorRule& rule, int depth);

/// Per-vertex successor-count measurement over the non-root vertices of
/// V_depth (their successors must be present, i.e. the configuration must
/// cover V_{depth+1}).  Two readings are reported side by side:
///  - strict: one common count vector at every vertex regardless of colour;
///  - diagonal: for each colour a, the number of a-coloured successors of
///    a-coloured vertices (defined per colour actually present).
struct CMeasurement {
    std::map<VertexAddr, std::vector<int>> per_vertex;

    bool strict_constant = false;
    std::vector<int> strict_c;  // meaningful when strict_constant

    bool diagonal_constant = false;
    std::map<Color, int> diagonal;  // colour -> self-count, colours present only
};

CMeasurement measure_c_values(const ModelParams& p, const Configuration& omega, int depth);

/// Initial boundary log-ratio vector of a strict profile:
///   Y^l = J (c^l - c^q),  l = 1..q-1.
std::vector<double> initial_Y(const ModelParams& p, const SuccessorProfile& profile);

}  // namespace potts
