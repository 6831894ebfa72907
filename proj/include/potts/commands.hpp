#pragma once

#include <string>

#include "potts/dynamics.hpp"
#include "potts/model.hpp"

namespace potts {

/// Command cores shared by the CLI binary and the test-suite: each takes
/// fully-parsed inputs and returns the complete output document (CSV or JSON
/// text, trailing newline included).  All are deterministic - identical
/// arguments produce byte-identical documents.  Operation-level failures are
/// reported by throwing; the binary turns them into one-line JSON diagnostics
/// and a non-zero exit code.

/// Sweep of the measure count over a theta interval (CSV: theta,count,regime);
/// rows for every critical theta_m and for q+1 inside the interval are
/// injected exactly so regime boundaries are always visible.
std::string cmd_phase(int q, double theta_min, double theta_max, int steps);

/// Full catalogue at one (q, theta) as JSON, each entry carrying its
/// log-ratio vector and fixed-point residual (k = 2).
std::string cmd_tisgm(int q, double theta);

/// Direction field plus iteration endpoints over a start grid
/// (CSV: v1_start,v2_start,dv1,dv2,limit_id,limit_x,limit_y).
std::string cmd_dynamics_field(const ModelParams& p, const FieldGrid& grid, long long n_steps);

/// Invariant-line basin check: the case-table prediction next to an actual
/// iteration from the same start (JSON).
std::string cmd_dynamics_basin(const ModelParams& p, int m, double v0_first);

/// Every constant boundary law, classified
/// (CSV: id,v1..v{q-1},residual,stability,spectral_radius).
std::string cmd_dynamics_fixedpoints(const ModelParams& p);

/// Exact-recursion trajectory under a boundary specification, with the
/// matched catalogue entry when the trajectory settles.  Boundary specs are
/// JSON: {"type":"profile","c":[...]} | {"type":"rule","table":{"1":[1,2],...},
/// "root":1} | {"type":"figure","name":"fig7"} | {"type":"explicit",
/// "assign":{"0.1":2,...}}.  format is "csv" (trajectory table plus a final
/// comment line with the match) or "json" (trajectory and result in one
/// document).
std::string cmd_simulate(const ModelParams& p, const std::string& boundary_json, int n_max,
                         double tol, const std::string& format);

/// Two-block classifier prediction for a boundary specification (JSON),
/// optionally cross-checked by the exact recursion.
std::string cmd_classify(const ModelParams& p, const std::string& boundary_json,
                         bool with_empirical, int n_max, double tol);

/// Recursion-vs-enumeration comparison report (JSON): max relative errors of
/// root marginals and small-volume cylinder probabilities over deterministic
/// random boundary configurations.
std::string cmd_oracle(const ModelParams& p, int depth, int samples, unsigned seed);

}  // namespace potts
