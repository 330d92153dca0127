#include <doctest.h>

#include <cmath>

#include "sc/engine_ode.hpp"
#include "sc/observables.hpp"

using namespace sc;

namespace {

/// n alternating charges equispaced on a circle (n even).
SimParams alternating_circle(std::size_t n, double radius = 1.0) {
    SimParams p;
    std::vector<Vec2> pts;
    std::vector<int> signs;
    for (std::size_t k = 0; k < n; ++k) {
        double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
        signs.push_back(k % 2 ? -1 : 1);
    }
    p.x0 = Configuration::all_alive(pts);
    p.signs = SignVector(signs);
    p.t_end = 2.0;
    p.dt_max = 1e-3;
    p.step_factor = 0.02;
    p.eps_coll = 1e-4;
    return p;
}

SimParams triangle_with_center() {
    SimParams p;
    const double r32 = std::sqrt(3.0) / 2.0;
    p.x0 = Configuration::all_alive({{0, 1}, {-r32, -0.5}, {r32, -0.5}, {0, 0}});
    p.signs = SignVector({1, 1, 1, -1});
    p.t_end = 1.0;
    p.dt_max = 1e-3;
    p.step_factor = 0.1;
    p.eps_coll = 1e-4;
    return p;
}

}  // namespace

TEST_CASE("octagon collapse ends in a detected collision just before t = 1") {
    // The perfectly symmetric all-particle collapse is dynamically unstable:
    // rounding seeds a pairing mode that grows like (1-t)^-8, so in double
    // precision the run ends in a two-particle collision around t ~ 0.99.
    SimParams p = alternating_circle(8);
    OdeRunResult r = run_ode(p);
    REQUIRE(r.terminated == OdeTermination::collision_detected);
    REQUIRE(r.collision.has_value());
    CHECK(r.collision->indices.size() >= 2);
    CHECK(r.collision->time > 0.97);
    CHECK(r.collision->time < 1.0);
    CHECK(r.collision->site.norm() < 0.2);  // on the shrunken ring
    // opposite signs collide, never equal ones
    bool has_plus = false, has_minus = false;
    for (std::size_t i : r.collision->indices) {
        (p.signs[i] > 0 ? has_plus : has_minus) = true;
    }
    CHECK(has_plus);
    CHECK(has_minus);
    // every pairwise distance in the reported cluster is below eps_coll
    const Configuration& last = r.samples.back().second;
    for (std::size_t a : r.collision->indices) {
        for (std::size_t b : r.collision->indices) {
            if (a < b) CHECK(distance(last.positions[a], last.positions[b]) < p.eps_coll);
        }
    }
}

TEST_CASE("octagon dispersion follows 8 - 8t until the detected collision") {
    SimParams p = alternating_circle(8);
    p.record_stride = 1;
    OdeRunResult r = run_ode(p);
    ConservationReport rep = conservation_report(r, p, /*rel_floor=*/1e-4);
    CHECK(rep.dispersion_slope == doctest::Approx(-8.0));
    CHECK(rep.initial_dispersion == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(rep.max_affine_rel_dev < 1e-5);
    CHECK(rep.max_mean_drift < 1e-8);
}

TEST_CASE("triangle plus center stays put") {
    SimParams p = triangle_with_center();
    OdeRunResult r = run_ode(p);
    CHECK(r.terminated == OdeTermination::reached_t_end);
    const Configuration& last = r.samples.back().second;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(distance(last.positions[i], p.x0.positions[i]) < 1e-6);
    }
}

TEST_CASE("same-sign pair disperses affinely") {
    SimParams p;
    p.signs = SignVector({1, 1});
    p.x0 = Configuration::all_alive({{0, 0}, {0.7, 0.3}});
    p.t_end = 1.0;
    p.record_stride = 10;
    OdeRunResult r = run_ode(p);
    CHECK(r.terminated == OdeTermination::reached_t_end);
    ConservationReport rep = conservation_report(r, p);
    CHECK(rep.dispersion_slope == doctest::Approx(2.0));  // (sum b)^2 - N = 2
    CHECK(rep.max_affine_rel_dev < 1e-6);
}

TEST_CASE("single particle does not move at all") {
    SimParams p;
    p.signs = SignVector({1});
    p.x0 = Configuration::all_alive({{0.3, -0.4}});
    p.t_end = 1.0;
    OdeRunResult r = run_ode(p);
    CHECK(r.terminated == OdeTermination::reached_t_end);
    ConservationReport rep = conservation_report(r, p);
    CHECK(rep.max_mean_drift == 0.0);
    CHECK(r.samples.back().second.positions[0] == p.x0.positions[0]);
}

TEST_CASE("scale covariance: x -> Lx, t -> L^2 t") {
    for (double L : {0.5, 2.0}) {
        SimParams base = alternating_circle(4);
        base.t_end = 0.4;  // stays clear of the collapse

        SimParams scaled = base;
        for (Vec2& q : scaled.x0.positions) q *= L;
        scaled.t_end = base.t_end * L * L;
        scaled.dt_max = base.dt_max * L * L;
        scaled.eps_coll = base.eps_coll * L;

        OdeRunResult rb = run_ode(base);
        OdeRunResult rs = run_ode(scaled);
        REQUIRE(rb.terminated == OdeTermination::reached_t_end);
        REQUIRE(rs.terminated == OdeTermination::reached_t_end);

        const Configuration& xb = rb.samples.back().second;
        const Configuration& xs = rs.samples.back().second;
        for (std::size_t i = 0; i < xb.size(); ++i) {
            CHECK(distance(L * xb.positions[i], xs.positions[i]) < 1e-6 * std::max(1.0, L));
        }
    }
}

TEST_CASE("sign flip leaves the trajectory unchanged") {
    SimParams p = alternating_circle(4);
    p.t_end = 0.3;
    SimParams flipped = p;
    std::vector<int> neg;
    for (int s : p.signs.raw()) neg.push_back(-s);
    flipped.signs = SignVector(neg);

    OdeRunResult a = run_ode(p);
    OdeRunResult b = run_ode(flipped);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(a.samples.back().second == b.samples.back().second);  // bitwise
}

TEST_CASE("relabeling permutes the trajectory") {
    SimParams p;
    p.signs = SignVector({1, -1, 1});
    p.x0 = Configuration::all_alive({{0, 0}, {1.5, 0}, {0, 2}});
    p.t_end = 0.2;

    // permutation (0 1 2) -> (2 0 1)
    const std::size_t perm[3] = {2, 0, 1};
    SimParams q = p;
    std::vector<int> signs(3);
    std::vector<Vec2> pts(3);
    for (std::size_t i = 0; i < 3; ++i) {
        signs[i] = p.signs[perm[i]];
        pts[i] = p.x0.positions[perm[i]];
    }
    q.signs = SignVector(signs);
    q.x0 = Configuration::all_alive(pts);

    OdeRunResult a = run_ode(p);
    OdeRunResult b = run_ode(q);
    const Configuration& xa = a.samples.back().second;
    const Configuration& xb = b.samples.back().second;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(distance(xb.positions[i], xa.positions[perm[i]]) < 1e-9);
    }
}

TEST_CASE("run_ode rejects invalid parameters") {
    SimParams p = triangle_with_center();
    p.gamma = -1.0;
    CHECK_THROWS_AS(run_ode(p), std::invalid_argument);
}
