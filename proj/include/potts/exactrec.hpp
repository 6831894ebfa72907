#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "potts/boundary.hpp"
#include "potts/model.hpp"

namespace potts {

/// Normalized log-ratio vector of subtree weights: Y^l = ln(W(l)/W(q)) for
/// l = 1..q-1.  The raw weights W grow doubly exponentially in the volume and
/// are never materialized.
using LogRatioVector = std::vector<double>;

/// Log-ratio vectors for every vertex of one sphere, aligned with
/// sphere(depth) in lexicographic order.  For depth >= 2 the successors of
/// sphere(depth-1)[j] occupy the contiguous block [j*k, (j+1)*k).
struct LevelRatios {
    int depth = 0;
    std::vector<LogRatioVector> values;
};

/// Potts energy of `sigma` on `region` with boundary condition `omega`:
///   E = -J (#monochromatic edges inside the region)
///       -J (#monochromatic edges from the region to its outside neighbours).
double energy(const ModelParams& p, const std::vector<VertexAddr>& region,
              const Configuration& sigma, const Configuration& omega);

/// Full finite-volume Gibbs distribution on V_n by direct enumeration of all
/// q^|V_n| configurations.  The independent cross-check for the recursion
/// path; refuses volumes above `state_cap` states.
struct BruteForceTable {
    int q = 0;
    std::vector<VertexAddr> order;  // ball(n) in lexicographic order
    std::vector<double> prob;       // indexed by the mixed-radix state over `order`

    double prob_of(const Configuration& sigma) const;          // sigma covers the ball
    std::vector<double> marginal(const VertexAddr& v) const;   // length q
    double cylinder_mass(const Configuration& eta) const;      // eta on a sub-ball
    std::string to_json() const;  // probabilities keyed by serialized configurations
};

BruteForceTable brute_force_distribution(const ModelParams& p, int n, const Configuration& omega,
                                         std::uint64_t state_cap = 10'000'000);

/// Single-edge transfer of a successor's log-ratio vector:
///   F_l(y) = ln[ ((theta-1) e^{y_l} + sum_p e^{y_p} + 1) / (theta + sum_p e^{y_p}) ].
/// Evaluated with max-subtraction so large |y| cannot overflow.
LogRatioVector transfer(const ModelParams& p, const LogRatioVector& y);

/// Boundary seed of the recursion at depth n >= 1: a vertex s with successor
/// colours drawn from omega on sphere(n+1) gets
///   Y^l(s) = J (#successors coloured l - #successors coloured q).
LevelRatios base_log_ratios(const ModelParams& p, int n, const Configuration& omega);

/// One upward step: combine each parent's successors,
///   Y(s) = sum over successors u of F(Y(u)).
/// Defined for depth >= 2 (the root is handled by root_marginal).
LevelRatios lift_ratios(const ModelParams& p, const LevelRatios& lower);

/// Root colour distribution in volume V_n under boundary omega on sphere(n+1):
/// the k+1 level-1 vectors are combined through F and normalized.
std::vector<double> root_marginal(const ModelParams& p, int n, const Configuration& omega);

/// P( sigma restricted to V_m equals eta ) in volume V_n, n > m, computed from
/// the level-m log-ratios; the per-vertex weight normalizers cancel between
/// numerator and denominator.
struct CylinderQuery {
    int m = 1;
    Configuration eta;  // defined on all of V_m
};
double cylinder_probability(const ModelParams& p, int n, const Configuration& omega,
                            const CylinderQuery& query, std::uint64_t state_cap = 10'000'000);

/// Level-1 log-ratio vector at the designated vertex (the root's first
/// successor) for volumes V_1..V_{n_max} under a generation rule, plus a flag
/// telling whether every sphere of that volume carries one common vector
/// (sup-norm tolerance 1e-9).
struct TrajectoryPoint {
    int n = 0;
    LogRatioVector y;
    bool homogeneous = false;
};
std::vector<TrajectoryPoint> ratio_trajectory(const ModelParams& p, const SuccessorRule& rule,
                                              int n_max);

/// Colour counts on sphere(n) restricted to the subtree hanging off the
/// root's i-th successor.
std::map<Color, std::uint64_t> color_census(const ModelParams& p, int n, int i,
                                            const Configuration& sigma);

}  // namespace potts
