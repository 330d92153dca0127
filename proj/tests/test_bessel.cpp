#include <doctest.h>

#include <cmath>

#include "sc/bessel.hpp"
#include "sc/core.hpp"
#include "sc/stats.hpp"

using namespace sc;

TEST_CASE("absorbing start: delta = 0 from r = 0") {
    BesselResult p = simulate_sqb0(0.0, 0.0, 1e-3, 0.1, 1);
    REQUIRE(p.hit_zero_at.has_value());
    CHECK(*p.hit_zero_at == 0.0);
    for (double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("path shape invariants") {
    BesselResult p = simulate_sqb0(0.5, 1.0, 1e-3, 2.0, 99);
    CHECK(p.times.front() == 0.0);
    CHECK(p.values.front() == 1.0);
    CHECK(p.times.back() == doctest::Approx(2.0));
    for (std::size_t k = 1; k < p.times.size(); ++k) CHECK(p.times[k] > p.times[k - 1]);
    for (double v : p.values) CHECK(v >= 0.0);
    if (p.hit_zero_at) {
        bool frozen = false;
        for (std::size_t k = 0; k < p.times.size(); ++k) {
            if (p.times[k] >= *p.hit_zero_at) frozen = true;
            if (frozen) CHECK(p.values[k] == 0.0);
        }
    }
}

TEST_CASE("same seed reproduces the path bit for bit") {
    BesselResult a = simulate_sqb0(1.5, 0.7, 1e-3, 1.0, 1234);
    BesselResult b = simulate_sqb0(1.5, 0.7, 1e-3, 1.0, 1234);
    CHECK(a.values == b.values);
    CHECK(a.hit_zero_at == b.hit_zero_at);
}

TEST_CASE("delta = 2 never hits zero") {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
        BesselResult p = simulate_sqb0(2.0, 1.0, 1e-3, 5.0, derive_seed(5, i));
        if (p.hit_zero_at) ++hits;
    }
    CHECK(hits == 0);
}

TEST_CASE("mean law E R_t = r + delta t for delta >= 2") {
    for (double delta : {2.0, 4.0}) {
        const double r = 1.0, t_end = 1.0;
        const std::size_t n = 10000;
        std::uint64_t lane = 170 + static_cast<std::uint64_t>(delta);
        std::vector<double> finals(n);
        for (std::size_t i = 0; i < n; ++i) {
            finals[i] = simulate_sqb0(delta, r, 1e-3, t_end, derive_seed(lane, i)).values.back();
        }
        double m = mean_of(finals);
        double se = std::sqrt(variance_of(finals) / n);
        // small absolute slack for the O(dt) weak error at dt = 1e-3
        CHECK(std::abs(m - (r + delta * t_end)) <= 3.0 * se + 0.01);
    }
}

TEST_CASE("hitting probability of the zero-dimensional process") {
    // closed form: P(sigma <= t) = exp(-r / (2t))
    HittingEstimate est = hitting_probability(0.0, 1.0, 1.0, 1e-3, 20000, 2025);
    double target = std::exp(-0.5);
    CHECK(std::abs(est.probability - target) <= 3.0 * est.standard_error + 3e-3);

    HittingEstimate never = hitting_probability(2.0, 1.0, 1.0, 1e-3, 2000, 9);
    CHECK(never.probability == 0.0);

    HittingEstimate longrun = hitting_probability(0.0, 1.0, 100.0, 1e-2, 2000, 10);
    CHECK(longrun.probability > 0.99);
}

TEST_CASE("scaling law: (1/alpha) R_{alpha s} is SqB0(delta, r/alpha)") {
    const double grid[3] = {0.25, 0.5, 1.0};
    SUBCASE("alpha = 1 identity") {
        auto pts = scaling_check(1.0, 1.0, 1.0, grid, 3000, 31);
        for (const auto& p : pts) CHECK(p.p_value > 0.001);
    }
    SUBCASE("alpha = 4, delta = 2") {
        auto pts = scaling_check(2.0, 1.0, 4.0, grid, 3000, 32);
        for (const auto& p : pts) CHECK(p.p_value > 0.001);
    }
    SUBCASE("alpha = 0.5, delta = 0.5, r = 2") {
        auto pts = scaling_check(0.5, 2.0, 0.5, grid, 3000, 33);
        for (const auto& p : pts) CHECK(p.p_value > 0.001);
    }
}

TEST_CASE("dimension-2 marginal from zero start matches |BM_2|^2") {
    // |B_t|^2 for a standard planar Brownian motion is Exp(mean 2t)
    const double t = 0.5;
    const std::size_t n = 10000;
    std::vector<double> sample(n);
    std::vector<double> tgrid{t};
    auto marg = sqb0_marginals(2.0, 0.0, 1e-4, tgrid, n, 77);
    sample = marg[0];
    auto cdf = [t](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / (2.0 * t)); };
    KsResult ks = ks_one_sample(sample, cdf);
    CHECK(ks.p_value > 0.001);
}

TEST_CASE("monotone coupling: larger start dominates under shared noise") {
    // Same seed means the same noise stream; absorption keeps the order.
    for (auto [delta, hi, lo] : {std::tuple{0.0, 1.0, 0.4}, std::tuple{5.0, 2.0, 1.0}}) {
        for (std::size_t i = 0; i < 200; ++i) {
            std::uint64_t s = derive_seed(400 + static_cast<std::uint64_t>(delta), i);
            BesselResult a = simulate_sqb0(delta, hi, 1e-3, 1.0, s);
            BesselResult b = simulate_sqb0(delta, lo, 1e-3, 1.0, s);
            REQUIRE(a.values.size() == b.values.size());
            for (std::size_t k = 0; k < a.values.size(); ++k) {
                CHECK(a.values[k] >= b.values[k]);
            }
        }
    }
}

TEST_CASE("inverse sqrt time integral") {
    SUBCASE("deterministic ramp R_s = sigma - s gives 2") {
        BesselResult ramp;
        const double sigma = 1.0, dt = 1e-6;
        for (double t = 0.0; t < sigma; t += dt) {
            ramp.times.push_back(t);
            ramp.values.push_back(sigma - t);
        }
        ramp.times.push_back(sigma);
        ramp.values.push_back(0.0);
        ramp.hit_zero_at = sigma;
        CHECK(inverse_sqrt_time_integral(ramp) == doctest::Approx(2.0).epsilon(5e-3));
    }
    SUBCASE("finite for every absorbed sample path") {
        std::size_t absorbed = 0;
        for (std::size_t i = 0; i < 1000; ++i) {
            BesselResult p = simulate_sqb0(0.0, 1.0, 1e-3, 20.0, derive_seed(808, i));
            if (!p.hit_zero_at) continue;
            ++absorbed;
            double v = inverse_sqrt_time_integral(p);
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
        }
        CHECK(absorbed > 900);
    }
    SUBCASE("unabsorbed path is an error") {
        BesselResult p = simulate_sqb0(2.0, 1.0, 1e-3, 0.5, 5);
        REQUIRE(!p.hit_zero_at);
        CHECK_THROWS_AS(inverse_sqrt_time_integral(p), std::invalid_argument);
    }
}
