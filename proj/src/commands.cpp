#include "potts/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "potts/boundary.hpp"
#include "potts/classify.hpp"
#include "potts/exactrec.hpp"
#include "potts/tisgm.hpp"

namespace potts {

namespace {

using nlohmann::json;

constexpr const char* kToolName = "pottsgibbs";
constexpr const char* kToolVersion = "0.1.0";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json meta_json(const std::string& subcommand) {
    json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["subcommand"] = subcommand;
    return m;
}

json meta_json(const std::string& subcommand, const ModelParams& p) {
    json m = meta_json(subcommand);
    m["q"] = p.q;
    m["k"] = p.k;
    m["J"] = p.J;
    m["theta"] = p.theta;
    return m;
}

json descriptor_json(const TisgmDescriptor& d) {
    json j;
    j["q"] = d.q;
    j["theta"] = d.theta;
    j["m"] = d.m;
    j["branch"] = branch_name(d.branch);
    j["support"] = d.support;
    j["h"] = d.h;
    j["log_ratio_vector"] = d.log_ratio_vector();
    return j;
}

double sup_dist(const LogRatioVector& a, const LogRatioVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

json empirical_json(const EmpiricalResult& e) {
    json j;
    j["resolved"] = e.resolved;
    j["n_reached"] = e.n_reached;
    j["final_diff"] = e.final_diff;
    j["final_y"] = e.final_y;
    if (e.resolved) {
        j["descriptor"] = descriptor_json(e.descriptor);
        j["match_distance"] = e.match_distance;
    } else {
        j["descriptor"] = nullptr;
    }
    return j;
}

json classification_json(const BoundaryClassification& c) {
    json j;
    j["measure"] = descriptor_json(c.measure);
    j["mu_index"] = c.mu_index;
    j["m"] = c.m;
    j["small_class"] = c.small_class;
    j["case"] = c.case_label;
    return j;
}

/// Parsed boundary specification; exactly one of the members is active.
struct BoundarySpec {
    std::optional<SuccessorProfile> profile;
    std::optional<SuccessorRule> rule;      // set for rule, figure, and strict profile specs
    std::optional<Configuration> config;    // set for explicit specs
};

BoundarySpec parse_boundary(const ModelParams& p, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed boundary spec: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw std::invalid_argument("boundary spec must be an object with a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    BoundarySpec out;
    try {
        if (type == "profile") {
            SuccessorProfile prof;
            prof.c = j.at("c").get<std::vector<int>>();
            prof.validate(p);
            out.profile = prof;
            if (prof.strict(p.k)) out.rule = rule_from_profile(p, prof);
        } else if (type == "rule") {
            SuccessorRule r;
            for (const auto& [key, val] : j.at("table").items()) {
                std::size_t pos = 0;
                const int colour = std::stoi(key, &pos);
                if (pos != key.size() || colour < 1 || colour > p.q)
                    throw std::invalid_argument("table key '" + key + "' is not a colour in 1..q");
                r.table[colour] = val.get<std::vector<int>>();
            }
            r.root_color = j.value("root", 1);
            r.validate(p);
            out.rule = r;
        } else if (type == "figure") {
            out.rule = figure_rule(j.at("name").get<std::string>());
            out.rule->validate(p);
        } else if (type == "explicit") {
            Configuration cfg;
            for (const auto& [key, val] : j.at("assign").items()) {
                const VertexAddr v = VertexAddr::parse(key);
                const int colour = val.get<int>();
                if (colour < 1 || colour > p.q)
                    throw std::invalid_argument("colour " + std::to_string(colour) +
                                                " outside 1..q at vertex " + key);
                cfg.set(v, colour);
            }
            out.config = std::move(cfg);
        } else {
            throw std::invalid_argument("unknown boundary spec type '" + type +
                                        "' (expected profile|rule|figure|explicit)");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed boundary spec: ") + e.what());
    }
    return out;
}

/// Deepest d such that sphere(1)..sphere(d) are fully assigned.
int deepest_complete_sphere(const ModelParams& p, const Configuration& cfg) {
    int d = 0;
    while (true) {
        bool complete = true;
        for (const auto& v : sphere(p, d + 1)) {
            if (cfg.assign.find(v) == cfg.assign.end()) {
                complete = false;
                break;
            }
        }
        if (!complete) return d;
        ++d;
    }
}

bool level_constant(const LevelRatios& lr) {
    for (const auto& y : lr.values)
        if (sup_dist(y, lr.values.front()) > 1e-9) return false;
    return true;
}

/// Trajectory of level-1 vectors directly from an explicit configuration,
/// one entry per usable volume depth.
std::vector<TrajectoryPoint> explicit_trajectory(const ModelParams& p, const Configuration& cfg,
                                                 int n_max) {
    const int deepest = deepest_complete_sphere(p, cfg);
    if (deepest < 2)
        throw std::invalid_argument(
            "explicit boundary must completely cover at least spheres 1 and 2");
    const int limit = std::min(n_max, deepest - 1);
    std::vector<TrajectoryPoint> traj;
    for (int n = 1; n <= limit; ++n) {
        LevelRatios lr = base_log_ratios(p, n, cfg);
        bool hom = level_constant(lr);
        while (lr.depth > 1) {
            lr = lift_ratios(p, lr);
            hom = hom && level_constant(lr);
        }
        traj.push_back({n, lr.values.front(), hom});
    }
    return traj;
}

std::string trajectory_csv(const ModelParams& p, const std::vector<TrajectoryPoint>& traj,
                           const EmpiricalResult& result) {
    std::string out = "n";
    for (int l = 1; l < p.q; ++l) out += ",y" + std::to_string(l);
    out += ",homogeneous,diff\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += std::to_string(traj[i].n);
        for (double y : traj[i].y) out += "," + fmt(y);
        out += traj[i].homogeneous ? ",1" : ",0";
        out += ",";
        if (i > 0) out += fmt(sup_dist(traj[i].y, traj[i - 1].y));
        out += "\n";
    }
    out += "# result: " + empirical_json(result).dump() + "\n";
    return out;
}

json trajectory_json(const std::vector<TrajectoryPoint>& traj) {
    json rows = json::array();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        json row;
        row["n"] = traj[i].n;
        row["y"] = traj[i].y;
        row["homogeneous"] = traj[i].homogeneous;
        if (i > 0) row["diff"] = sup_dist(traj[i].y, traj[i - 1].y);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string cmd_phase(int q, double theta_min, double theta_max, int steps) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (!(theta_min > 1.0)) throw std::invalid_argument("theta_min must exceed 1");
    if (!(theta_max >= theta_min)) throw std::invalid_argument("theta_max must be >= theta_min");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");

    std::vector<double> thetas;
    for (int i = 0; i <= steps; ++i)
        thetas.push_back(theta_min + (theta_max - theta_min) * i / steps);
    for (int m = 1; m <= q / 2; ++m) {
        const double tm = theta_crit(q, m);
        if (tm >= theta_min && tm <= theta_max) thetas.push_back(tm);
    }
    const double tc = q + 1.0;
    if (tc >= theta_min && tc <= theta_max) thetas.push_back(tc);
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                 thetas.end());

    std::string out = "theta,count,regime\n";
    for (double t : thetas)
        out += fmt(t) + "," + std::to_string(count_tisgms(q, t)) + "," + regime_label(q, t) + "\n";
    return out;
}

std::string cmd_tisgm(int q, double theta) {
    const RegimeReport rep = enumerate_tisgms(q, theta);
    const ModelParams p = ModelParams::from_theta(q, 2, theta);

    json out;
    out["meta"] = meta_json("tisgm", p);
    out["regime"] = rep.regime;
    out["total"] = rep.total;
    json mult = json::array();
    for (const auto& [key, count] : rep.multiplicity) {
        json e;
        e["m"] = key.first;
        e["branch"] = branch_name(key.second);
        e["count"] = count;
        mult.push_back(std::move(e));
    }
    out["multiplicity"] = std::move(mult);
    json descs = json::array();
    for (const auto& d : rep.descriptors) {
        json e = descriptor_json(d);
        const LogRatioVector v = d.log_ratio_vector();
        e["residual"] = sup_dist(step_G(p, v), v);
        descs.push_back(std::move(e));
    }
    out["descriptors"] = std::move(descs);
    return out.dump(2) + "\n";
}

std::string cmd_dynamics_field(const ModelParams& p, const FieldGrid& grid, long long n_steps) {
    const auto samples = field_sample(p, grid, n_steps);
    std::string out = "v1_start,v2_start,dv1,dv2,limit_id,limit_x,limit_y\n";
    for (const auto& s : samples) {
        out += fmt(s.v1_start) + "," + fmt(s.v2_start) + "," + fmt(s.dv1) + "," + fmt(s.dv2) + "," +
               std::to_string(s.limit_id) + "," + fmt(s.limit_x) + "," + fmt(s.limit_y) + "\n";
    }
    return out;
}

std::string cmd_dynamics_basin(const ModelParams& p, int m, double v0_first) {
    const TisgmDescriptor pred = basin_predict(p, m, v0_first);
    LogRatioVector v0(p.q - 1, 0.0);
    for (int l = 0; l < m; ++l) v0[l] = v0_first;
    const IterateResult r = iterate(p, v0, 1e-10, 200000);
    const double dist = sup_dist(r.v, pred.log_ratio_vector());

    json out;
    out["meta"] = meta_json("dynamics basin", p);
    out["m"] = m;
    out["v0_first"] = v0_first;
    out["prediction"] = descriptor_json(pred);
    json it;
    it["converged"] = r.converged;
    it["iterations"] = r.iterations;
    it["final_diff"] = r.final_diff;
    it["limit"] = r.v;
    it["distance_to_prediction"] = dist;
    it["matches_prediction"] = dist < 1e-6;
    out["iterate"] = std::move(it);
    return out.dump(2) + "\n";
}

std::string cmd_dynamics_fixedpoints(const ModelParams& p) {
    const auto points = find_all_fixed_points(p);
    std::string out = "id";
    for (int l = 1; l < p.q; ++l) out += ",v" + std::to_string(l);
    out += ",residual,stability,spectral_radius\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out += std::to_string(i);
        for (double x : points[i].point) out += "," + fmt(x);
        out += "," + fmt(points[i].residual) + "," + stability_name(points[i].stability) + "," +
               fmt(points[i].spectral_radius) + "\n";
    }
    return out;
}

std::string cmd_simulate(const ModelParams& p, const std::string& boundary_json, int n_max,
                         double tol, const std::string& format) {
    p.validate();
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("simulate supports formats csv and json");

    const BoundarySpec spec = parse_boundary(p, boundary_json);
    std::vector<TrajectoryPoint> traj;
    if (spec.config) {
        traj = explicit_trajectory(p, *spec.config, n_max);
    } else if (spec.rule) {
        traj = ratio_trajectory(p, *spec.rule, n_max);
    } else {
        throw std::invalid_argument(
            "profile is not strict, so no generating rule exists; pass a rule or an explicit "
            "configuration instead");
    }
    const EmpiricalResult result = match_trajectory(p, traj, tol);

    if (format == "csv") return trajectory_csv(p, traj, result);
    json out;
    out["meta"] = meta_json("simulate", p);
    out["n_max"] = n_max;
    out["tol"] = tol;
    out["trajectory"] = trajectory_json(traj);
    out["result"] = empirical_json(result);
    return out.dump(2) + "\n";
}

std::string cmd_classify(const ModelParams& p, const std::string& boundary_json,
                         bool with_empirical, int n_max, double tol) {
    p.validate();
    p.require_classifiable();
    const BoundarySpec spec = parse_boundary(p, boundary_json);

    std::optional<SuccessorProfile> prof = spec.profile;
    std::string note;
    if (!prof && spec.rule) {
        // Measure the rule's configurations; classification needs strictness.
        const int depth = 3;
        const CMeasurement meas = measure_c_values(p, generate_config(p, *spec.rule, depth), depth);
        if (meas.strict_constant) {
            SuccessorProfile mp;
            mp.c = meas.strict_c;
            prof = mp;
        } else {
            note = "generated configuration has no constant successor-count vector; the two-block "
                   "classifier does not apply";
        }
    } else if (!prof && spec.config) {
        const int deepest = deepest_complete_sphere(p, *spec.config);
        if (deepest < 2)
            throw std::invalid_argument(
                "explicit boundary must completely cover at least spheres 1 and 2");
        const CMeasurement meas = measure_c_values(p, *spec.config, deepest - 1);
        if (meas.strict_constant) {
            SuccessorProfile mp;
            mp.c = meas.strict_c;
            prof = mp;
        } else {
            note = "explicit configuration has no constant successor-count vector; the two-block "
                   "classifier does not apply";
        }
    } else if (prof && !prof->strict(p.k)) {
        note = "profile is not strict (counts sum to " + std::to_string(prof->sum()) +
               ", not k = " + std::to_string(p.k) + "); the two-block classifier does not apply";
        prof.reset();
    }

    json out;
    out["meta"] = meta_json("classify", p);
    if (prof) {
        out["profile"] = prof->c;
        out["prediction"] = classification_json(classify_boundary(p, *prof));
    } else {
        out["prediction"] = nullptr;
        out["note"] = note;
    }

    const bool run_empirical = with_empirical || !prof;
    if (run_empirical) {
        std::optional<SuccessorRule> rule = spec.rule;
        if (!rule && prof && prof->strict(p.k)) rule = rule_from_profile(p, *prof);
        if (rule) {
            out["empirical"] = empirical_json(empirical_classify(p, *rule, n_max, tol));
        } else if (spec.config) {
            out["empirical"] =
                empirical_json(match_trajectory(p, explicit_trajectory(p, *spec.config, n_max), tol));
        } else {
            throw std::domain_error(note +
                                    "; and no generating rule is available for the empirical path");
        }
    }
    return out.dump(2) + "\n";
}

std::string cmd_oracle(const ModelParams& p, int depth, int samples, unsigned seed) {
    p.validate();
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");

    const auto boundary = sphere(p, depth + 1);
    double max_root_rel = 0.0;
    double max_cyl_rel = 0.0;
    long long cylinder_queries = 0;

    // Cylinder queries cover all of V_1 when that stays small.
    const std::uint64_t v1 = ball_size(p, 1);
    bool do_cylinders = depth >= 2;
    std::uint64_t n_eta = 1;
    if (do_cylinders) {
        for (std::uint64_t i = 0; i < v1; ++i) {
            if (n_eta > 20000 / static_cast<std::uint64_t>(p.q)) {
                do_cylinders = false;
                break;
            }
            n_eta *= p.q;
        }
    }
    const auto v1_vertices = ball(p, 1);

    for (int s = 0; s < samples; ++s) {
        std::mt19937 rng(seed + 1000003u * static_cast<unsigned>(s));
        std::uniform_int_distribution<int> colour(1, p.q);
        Configuration omega;
        for (const auto& v : boundary) omega.set(v, colour(rng));

        const BruteForceTable brute = brute_force_distribution(p, depth, omega);
        const auto rec = root_marginal(p, depth, omega);
        const auto ref = brute.marginal(VertexAddr{});
        for (int c = 0; c < p.q; ++c)
            max_root_rel =
                std::max(max_root_rel, std::abs(rec[c] - ref[c]) / std::max(ref[c], 1e-300));

        if (do_cylinders) {
            std::vector<int> state(v1_vertices.size(), 0);
            while (true) {
                Configuration eta;
                for (std::size_t i = 0; i < v1_vertices.size(); ++i)
                    eta.set(v1_vertices[i], state[i] + 1);
                CylinderQuery query;
                query.m = 1;
                query.eta = eta;
                const double a = cylinder_probability(p, depth, omega, query);
                const double b = brute.cylinder_mass(eta);
                max_cyl_rel = std::max(max_cyl_rel, std::abs(a - b) / std::max(b, 1e-300));
                ++cylinder_queries;
                std::size_t i = 0;
                while (i < state.size() && ++state[i] == p.q) state[i++] = 0;
                if (i == state.size()) break;
            }
        }
    }

    json out;
    out["meta"] = meta_json("oracle", p);
    out["depth"] = depth;
    out["samples"] = samples;
    out["seed"] = seed;
    out["root_marginal_max_rel_err"] = max_root_rel;
    if (depth >= 2 && do_cylinders) {
        out["cylinder_max_rel_err"] = max_cyl_rel;
        out["cylinder_queries"] = cylinder_queries;
    } else {
        out["cylinder_max_rel_err"] = nullptr;
    }
    return out.dump(2) + "\n";
}

}  // namespace potts
