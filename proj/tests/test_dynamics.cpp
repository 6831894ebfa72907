#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "potts/dynamics.hpp"
#include "potts/tisgm.hpp"

using namespace potts;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

std::map<Stability, int> census(const ModelParams& p) {
    std::map<Stability, int> out;
    for (const auto& fp : find_all_fixed_points(p)) ++out[fp.stability];
    return out;
}

}  // namespace

TEST_CASE("analytic Jacobian matches central finite differences") {
    std::mt19937 rng(424242);
    for (int q : {3, 4, 5}) {
        const ModelParams p = ModelParams::from_theta(q, 2, 1.5 + q);
        std::uniform_real_distribution<double> coord(-3.0, 3.0);
        for (int trial = 0; trial < 40; ++trial) {
            LogRatioVector v(q - 1);
            for (double& x : v) x = coord(rng);
            const auto jac = jacobian_G(p, v);
            const double eps = 1e-5;
            for (int j = 0; j < q - 1; ++j) {
                LogRatioVector hi = v, lo = v;
                hi[j] += eps;
                lo[j] -= eps;
                const auto ghi = step_G(p, hi);
                const auto glo = step_G(p, lo);
                for (int l = 0; l < q - 1; ++l) {
                    const double fd = (ghi[l] - glo[l]) / (2 * eps);
                    CHECK(std::abs(jac[l][j] - fd) < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("iteration from small displacements lands on the predicted branches") {
    const ModelParams p = ModelParams::from_theta(3, 2, 4.5);
    const auto br = solve_branch(3, 4.5, 1);
    REQUIRE(br.size() == 2);
    const double h1 = br[0].h, h2 = br[1].h;

    const IterateResult up = iterate(p, {0.1, 0.0});
    CHECK(up.converged);
    CHECK(sup_diff(up.v, {h2, 0.0}) < 1e-9);

    const IterateResult down = iterate(p, {-0.1, 0.0});
    CHECK(down.converged);
    CHECK(sup_diff(down.v, {h1, 0.0}) < 1e-9);

    const IterateResult stay = iterate(p, {0.0, 0.0});
    CHECK(stay.converged);
    CHECK(stay.iterations <= 1);
    CHECK(sup_diff(stay.v, {0.0, 0.0}) == 0.0);
}

TEST_CASE("non-convergence is reported, not thrown") {
    const ModelParams p = ModelParams::from_theta(3, 2, 4.5);
    const IterateResult r = iterate(p, {0.1, 0.0}, 1e-12, 3);
    CHECK(!r.converged);
    CHECK(r.iterations == 3);
    CHECK(r.final_diff > 1e-12);
    CHECK(r.v.size() == 2);
    CHECK(r.prev.size() == 2);
    CHECK(sup_diff(r.v, r.prev) == doctest::Approx(r.final_diff).epsilon(1e-12));
}

TEST_CASE("the equal-leading-block lines are invariant under the map") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coord(-6.0, 6.0);
    for (int q : {3, 5, 6}) {
        const ModelParams p = ModelParams::from_theta(q, 2, 0.8 + q);
        for (int m = 1; m <= q / 2; ++m) {
            for (int trial = 0; trial < 300; ++trial) {
                const double h = coord(rng);
                LogRatioVector v(q - 1, 0.0);
                for (int l = 0; l < m; ++l) v[l] = h;
                const LogRatioVector g = step_G(p, v);
                for (int l = 1; l < m; ++l) CHECK(g[l] == doctest::Approx(g[0]).epsilon(1e-14));
                for (int l = m; l < q - 1; ++l) CHECK(g[l] == 0.0);
                // The scalar restriction reproduces the vector map on the line.
                CHECK(fm(q, p.theta, m, p.k, h) == doctest::Approx(g[0]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("scalar iteration is monotone toward its limit") {
    const int q = 3, m = 1, k = 2;
    const double theta = 4.5;
    const auto br = solve_branch(q, theta, m);
    const double h2 = br[1].h;

    // From above h2: strictly decreasing until the iterate lands on h2 bitwise.
    double h = h2 + 3.0;
    for (int i = 0; i < 200; ++i) {
        const double next = fm(q, theta, m, k, h);
        if (next == h) break;  // reached the fixed point exactly
        CHECK(next < h);
        CHECK(next > h2 - 1e-12);
        h = next;
    }
    CHECK(h == doctest::Approx(h2).epsilon(1e-6));

    // Between 0 and h2: strictly increasing until the iterate lands on h2.
    h = 0.05;
    for (int i = 0; i < 400; ++i) {
        const double next = fm(q, theta, m, k, h);
        if (next == h) break;
        CHECK(next > h);
        CHECK(next < h2 + 1e-12);
        h = next;
    }
    CHECK(h == doctest::Approx(h2).epsilon(1e-6));
}

TEST_CASE("fixed point classification rejects non-fixed points") {
    const ModelParams p = ModelParams::from_theta(3, 2, 4.5);
    CHECK_THROWS_AS(classify_fixed_point(p, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("stability census across the three reference regimes, q = 3") {
    const auto c39 = census(ModelParams::from_theta(3, 2, 3.9));
    CHECK(c39.at(Stability::attractor) == 4);
    CHECK(c39.at(Stability::saddle) == 3);
    CHECK(c39.count(Stability::repeller) == 0);

    const auto c40 = census(ModelParams::from_theta(3, 2, 4.0));
    CHECK(c40.at(Stability::repeller) == 1);
    CHECK(c40.at(Stability::attractor) == 3);
    CHECK(c40.count(Stability::saddle) == 0);

    const auto c45 = census(ModelParams::from_theta(3, 2, 4.5));
    CHECK(c45.at(Stability::repeller) == 1);
    CHECK(c45.at(Stability::saddle) == 3);
    CHECK(c45.at(Stability::attractor) == 3);
}

TEST_CASE("the merged branch at theta_m is marginal") {
    const double tm = theta_crit(3, 1);
    const auto points = find_all_fixed_points(ModelParams::from_theta(3, 2, tm));
    int marginal = 0;
    for (const auto& fp : points) marginal += fp.stability == Stability::marginal;
    CHECK(points.size() == 4);
    CHECK(marginal == 3);
}

TEST_CASE("basin prediction follows the case table at q=3") {
    const double tm = theta_crit(3, 1);

    // Below theta_m everything goes to the free measure.
    const ModelParams below = ModelParams::from_theta(3, 2, 3.5);
    CHECK(basin_predict(below, 1, 5.0).m == 0);
    CHECK(basin_predict(below, 1, -5.0).m == 0);

    // Between theta_m and theta_c: threshold at h1.
    const ModelParams mid = ModelParams::from_theta(3, 2, 3.9);
    const auto br = solve_branch(3, 3.9, 1);
    CHECK(basin_predict(mid, 1, br[0].h + 0.01).branch == BranchKind::high);
    CHECK(basin_predict(mid, 1, br[0].h).branch == BranchKind::low);
    CHECK(basin_predict(mid, 1, br[0].h - 0.01).m == 0);

    // At theta_c: threshold at 0, nothing converges to the low branch.
    const ModelParams tc = ModelParams::from_theta(3, 2, 4.0);
    CHECK(basin_predict(tc, 1, 0.2).branch == BranchKind::high);
    CHECK(basin_predict(tc, 1, 0.0).m == 0);
    CHECK(basin_predict(tc, 1, -0.2).m == 0);

    // Above theta_c: three-way split at 0.
    const ModelParams hi = ModelParams::from_theta(3, 2, 4.5);
    CHECK(basin_predict(hi, 1, 0.2).branch == BranchKind::high);
    CHECK(basin_predict(hi, 1, 0.0).m == 0);
    CHECK(basin_predict(hi, 1, -0.2).branch == BranchKind::low);

    // At theta_m: the merged branch attracts [h1, inf).
    const ModelParams at = ModelParams::from_theta(3, 2, tm);
    CHECK(basin_predict(at, 1, std::log(2.0) + 0.01).branch == BranchKind::low);
    CHECK(basin_predict(at, 1, std::log(2.0) - 0.01).m == 0);

    CHECK_THROWS(basin_predict(hi, 2, 0.1));  // m above q/2
    CHECK_THROWS(basin_predict(ModelParams::from_theta(3, 3, 4.5), 1, 0.1));
}

TEST_CASE("half-class predictions are reported in canonical high form") {
    // q=4, m=2, theta above theta_c: a negative start heads to the low branch,
    // which equals the high branch on the complementary support.
    const ModelParams p = ModelParams::from_theta(4, 2, 6.5);
    const TisgmDescriptor d = basin_predict(p, 2, -0.9);
    CHECK(d.branch == BranchKind::high);
    CHECK(d.support == std::vector<int>{3, 4});
    const IterateResult r = iterate(p, {-0.9, -0.9, 0.0});
    CHECK(r.converged);
    CHECK(sup_diff(r.v, d.log_ratio_vector()) < 1e-8);
}

TEST_CASE("field sampling resolves every start in the generic regime") {
    const ModelParams p = ModelParams::from_theta(3, 2, 4.5);
    FieldGrid grid;
    grid.n1 = 9;
    grid.n2 = 9;
    const auto samples = field_sample(p, grid, 20000);
    REQUIRE(samples.size() == 81);
    for (const auto& s : samples) {
        CHECK(s.limit_id >= 0);
        // dv is the one-step displacement of the map.
        const auto g = step_G(p, {s.v1_start, s.v2_start});
        CHECK(s.dv1 == doctest::Approx(g[0] - s.v1_start).epsilon(1e-12));
        CHECK(s.dv2 == doctest::Approx(g[1] - s.v2_start).epsilon(1e-12));
    }
}

TEST_CASE("field sampling in the uniqueness regime sends everything to the origin") {
    const ModelParams p = ModelParams::from_theta(3, 2, 3.5);
    FieldGrid grid;
    grid.n1 = 7;
    grid.n2 = 7;
    for (const auto& s : field_sample(p, grid, 20000)) {
        CHECK(s.limit_id == 0);
        CHECK(std::abs(s.limit_x) < 1e-9);
        CHECK(std::abs(s.limit_y) < 1e-9);
    }
}

TEST_CASE("the field inherits the coordinate-swap symmetry") {
    const ModelParams p = ModelParams::from_theta(3, 2, 4.2);
    FieldGrid grid;
    grid.n1 = 11;
    grid.n2 = 11;
    const auto samples = field_sample(p, grid, 5000);
    auto at = [&](int i1, int i2) -> const FieldSample& { return samples[i1 * 11 + i2]; };
    for (int i1 = 0; i1 < 11; ++i1) {
        for (int i2 = 0; i2 < 11; ++i2) {
            const FieldSample& a = at(i1, i2);
            const FieldSample& b = at(i2, i1);
            CHECK(a.dv1 == doctest::Approx(b.dv2).epsilon(1e-13));
            CHECK(a.dv2 == doctest::Approx(b.dv1).epsilon(1e-13));
            CHECK(a.limit_x == doctest::Approx(b.limit_y).epsilon(1e-9));
        }
    }
}
