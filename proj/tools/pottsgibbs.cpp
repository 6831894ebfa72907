// pottsgibbs - measures of the Potts model on a Cayley tree.
//
// Subcommands: phase, tisgm, dynamics (field|basin|fixedpoints), simulate,
// classify, oracle.  Results go to --out (default stdout); operation-level
// errors are printed to stderr as one-line JSON and yield exit code 1.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "potts/commands.hpp"
#include "potts/dynamics.hpp"
#include "potts/model.hpp"

namespace {

struct GlobalOpts {
    int q = 0;
    int k = 2;
    std::optional<double> theta;
    std::optional<double> J;
    std::string out;
    std::string format;
};

potts::ModelParams make_params(const GlobalOpts& g) {
    if (g.theta && g.J)
        throw std::invalid_argument("give exactly one of --theta and --J, not both");
    if (g.theta) return potts::ModelParams::from_theta(g.q, g.k, *g.theta);
    if (g.J) return potts::ModelParams::from_J(g.q, g.k, *g.J);
    throw std::invalid_argument("one of --theta or --J is required");
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + g.out + "'");
    f << text;
    if (!f) throw std::runtime_error("error writing output file '" + g.out + "'");
}

std::string read_boundary_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream f(arg.substr(1), std::ios::binary);
        if (!f) throw std::runtime_error("cannot read boundary file '" + arg.substr(1) + "'");
        return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    return arg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splitting Gibbs measures of the Potts model on a Cayley tree"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand name

    GlobalOpts g;
    app.add_option("--q", g.q, "number of colours (>= 2)")->required();
    app.add_option("--k", g.k, "branching number of the tree (default 2)");
    app.add_option("--theta", g.theta, "coupling as theta = exp(J)");
    app.add_option("--J", g.J, "coupling J (theta = exp(J))");
    app.add_option("--out", g.out, "output file (default: stdout)");
    app.add_option("--format", g.format, "output format where a choice exists (csv|json)");

    // phase
    auto* phase = app.add_subcommand("phase", "measure count and regime across a theta interval");
    double theta_min = 0.0, theta_max = 0.0;
    int phase_steps = 100;
    phase->add_option("--theta-min", theta_min, "left end of the interval (> 1)")->required();
    phase->add_option("--theta-max", theta_max, "right end of the interval")->required();
    phase->add_option("--steps", phase_steps, "number of uniform steps (default 100)");

    // tisgm
    auto* tisgm = app.add_subcommand("tisgm", "catalogue of constant boundary laws at one theta");

    // dynamics
    auto* dynamics = app.add_subcommand("dynamics", "the iteration map: field, basin, fixedpoints");
    std::string dyn_mode;
    dynamics->add_option("mode", dyn_mode, "one of field|basin|fixedpoints")->required();
    potts::FieldGrid grid;
    long long field_steps = 10000;
    dynamics->add_option("--v1-min", grid.v1_min, "grid minimum in v1 (default -4)");
    dynamics->add_option("--v1-max", grid.v1_max, "grid maximum in v1 (default 4)");
    dynamics->add_option("--v2-min", grid.v2_min, "grid minimum in v2 (default -4)");
    dynamics->add_option("--v2-max", grid.v2_max, "grid maximum in v2 (default 4)");
    dynamics->add_option("--n1", grid.n1, "grid points along v1 (default 41)");
    dynamics->add_option("--n2", grid.n2, "grid points along v2 (default 41)");
    dynamics->add_option("--steps", field_steps, "iteration budget per start (default 10000)");
    int basin_m = 1;
    double basin_v0 = 0.0;
    dynamics->add_option("--m", basin_m, "invariant-line index m (default 1)");
    dynamics->add_option("--v0", basin_v0, "start value on the invariant line (default 0)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "exact-recursion trajectory for a boundary");
    std::string sim_boundary;
    int sim_nmax = 400;
    double sim_tol = 1e-9;
    simulate->add_option("--boundary", sim_boundary, "boundary spec JSON (or @file)")->required();
    simulate->add_option("--n-max", sim_nmax, "largest volume depth (default 400)");
    simulate->add_option("--tol", sim_tol, "settling tolerance (default 1e-9)");

    // classify
    auto* classify = app.add_subcommand("classify", "two-block classifier for a boundary");
    std::string cls_boundary;
    int cls_nmax = 400;
    double cls_tol = 1e-9;
    bool cls_empirical = false;
    classify->add_option("--boundary", cls_boundary, "boundary spec JSON (or @file)")->required();
    classify->add_flag("--empirical", cls_empirical, "also run the exact recursion");
    classify->add_option("--n-max", cls_nmax, "empirical depth budget (default 400)");
    classify->add_option("--tol", cls_tol, "empirical settling tolerance (default 1e-9)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "recursion vs full enumeration on small volumes");
    int oracle_depth = 0;
    int oracle_samples = 5;
    unsigned oracle_seed = 12345;
    oracle->add_option("--depth", oracle_depth, "volume depth n (>= 1)")->required();
    oracle->add_option("--samples", oracle_samples, "random boundary samples (default 5)");
    oracle->add_option("--seed", oracle_seed, "RNG seed (default 12345)");

    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        std::string text;
        if (sub == "phase") {
            if (g.q < 2) throw std::invalid_argument("q must be >= 2");
            text = potts::cmd_phase(g.q, theta_min, theta_max, phase_steps);
        } else if (sub == "tisgm") {
            const potts::ModelParams p = make_params(g);
            text = potts::cmd_tisgm(p.q, p.theta);
        } else if (sub == "dynamics") {
            const potts::ModelParams p = make_params(g);
            if (dyn_mode == "field") {
                text = potts::cmd_dynamics_field(p, grid, field_steps);
            } else if (dyn_mode == "basin") {
                text = potts::cmd_dynamics_basin(p, basin_m, basin_v0);
            } else if (dyn_mode == "fixedpoints") {
                text = potts::cmd_dynamics_fixedpoints(p);
            } else {
                throw std::invalid_argument("dynamics mode must be field, basin, or fixedpoints");
            }
        } else if (sub == "simulate") {
            const potts::ModelParams p = make_params(g);
            const std::string format = g.format.empty() ? "csv" : g.format;
            text = potts::cmd_simulate(p, read_boundary_arg(sim_boundary), sim_nmax, sim_tol,
                                       format);
        } else if (sub == "classify") {
            const potts::ModelParams p = make_params(g);
            text = potts::cmd_classify(p, read_boundary_arg(cls_boundary), cls_empirical, cls_nmax,
                                       cls_tol);
        } else if (sub == "oracle") {
            const potts::ModelParams p = make_params(g);
            text = potts::cmd_oracle(p, oracle_depth, oracle_samples, oracle_seed);
        }
        emit(g, text);
    } catch (const std::exception& e) {
        nlohmann::json diag;
        diag["error"] = e.what();
        diag["subcommand"] = sub;
        std::cerr << diag.dump() << "\n";
        return 1;
    }
    return 0;
}
