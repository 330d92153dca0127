#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sc/observables.hpp"

using namespace sc;

namespace {

Configuration random_config(std::size_t n, std::mt19937_64& rng, double box = 2.0) {
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return Configuration::all_alive(pts);
}

std::vector<std::size_t> full_set(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

}  // namespace

TEST_CASE("local mean basics") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}});
    std::vector<std::size_t> k{0, 1};
    CHECK(local_mean(c, k) == Vec2{0.5, 0.0});

    std::vector<std::size_t> single{1};
    CHECK(local_mean(c, single) == c.positions[1]);

    Configuration sq = Configuration::all_alive({{1, 1}, {-1, 1}, {1, -1}, {-1, -1}});
    CHECK(local_mean(sq, full_set(4)) == Vec2{0, 0});
}

TEST_CASE("local mean rejects empty and dead indices") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}});
    c.alive[1] = false;
    CHECK_THROWS_AS(local_mean(c, std::vector<std::size_t>{}), std::invalid_argument);
    CHECK_THROWS_AS(local_mean(c, std::vector<std::size_t>{1}), std::invalid_argument);
}

TEST_CASE("local dispersion values") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}});
    CHECK(local_dispersion(c, full_set(2)) == doctest::Approx(0.5));
    CHECK(local_dispersion(c, std::vector<std::size_t>{0}) == 0.0);

    std::vector<Vec2> circle;
    for (int k = 0; k < 8; ++k) {
        double a = 2.0 * M_PI * k / 8.0;
        circle.push_back({std::cos(a), std::sin(a)});
    }
    Configuration oct = Configuration::all_alive(circle);
    CHECK(local_dispersion(oct, full_set(8)) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("the two dispersion formulas agree on random clusters") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 200; ++it) {
        std::size_t n = 2 + rng() % 7;
        Configuration c = random_config(n, rng);
        std::vector<std::size_t> k;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 2) k.push_back(i);
        }
        if (k.empty()) k.push_back(0);
        double a = local_dispersion(c, k);
        double b = local_dispersion_pair_form(c, k);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("dispersion ordering under cluster inclusion") {
    // K subset K' implies R^K <= (|K'|/|K|) R^{K'}
    std::mt19937_64 rng(4);
    for (int it = 0; it < 200; ++it) {
        std::size_t n = 3 + rng() % 5;
        Configuration c = random_config(n, rng);
        std::vector<std::size_t> big;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 4) big.push_back(i);
        }
        if (big.size() < 2) continue;
        std::vector<std::size_t> small(big.begin(), big.begin() + 1 + rng() % (big.size() - 1));
        double rk = local_dispersion(c, small);
        double rkp = local_dispersion(c, big);
        double ratio = static_cast<double>(big.size()) / static_cast<double>(small.size());
        CHECK(rk <= ratio * rkp + 1e-12);
    }
}

TEST_CASE("cluster and partition separation") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}, {5, 0}});
    std::vector<std::size_t> k{0, 1};
    CHECK(cluster_separation(c, k) == doctest::Approx(4.0));

    Partition p;
    p.blocks = {{0, 1}, {2}};
    CHECK(partition_separation(c, p) == doctest::Approx(4.0));

    CHECK_THROWS_AS(cluster_separation(c, full_set(3)), std::invalid_argument);
    Partition one;
    one.blocks = {{0, 1, 2}};
    CHECK_THROWS_AS(partition_separation(c, one), std::invalid_argument);
}

TEST_CASE("sign extremes") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}, {3, 0}});
    SignExtremes e = sign_extremes(c, SignVector({1, -1, 1}));
    CHECK(e.d_opp == doctest::Approx(1.0));
    CHECK(e.d_same == doctest::Approx(3.0));

    Configuration two = Configuration::all_alive({{0, 0}, {2, 0}});
    SignExtremes same = sign_extremes(two, SignVector({1, 1}));
    CHECK(!same.d_opp.has_value());
    CHECK(same.d_same == doctest::Approx(2.0));

    SignExtremes opp = sign_extremes(two, SignVector({1, -1}));
    CHECK(!opp.d_same.has_value());
    CHECK(opp.d_opp == doctest::Approx(2.0));
}

TEST_CASE("bessel dimension formula") {
    SignVector pm({1, -1});
    CHECK(bessel_dimension(full_set(2), pm, 1.0) == doctest::Approx(0.0));

    SignVector pp({1, 1});
    CHECK(bessel_dimension(full_set(2), pp, 1.0) == doctest::Approx(4.0));

    SignVector three({1, 1, -1});
    CHECK(bessel_dimension(full_set(3), three, 0.5) == doctest::Approx(3.0));

    // same-sign cluster: gamma k(k-1) + 2(k-1) > 2 for k >= 2, gamma > 0
    for (std::size_t k = 2; k <= 6; ++k) {
        for (double g : {0.1, 1.0, 3.0}) {
            SignVector b(std::vector<int>(k, 1));
            double d = bessel_dimension(full_set(k), b, g);
            CHECK(d == doctest::Approx(g * k * (k - 1) + 2.0 * (k - 1)));
            CHECK(d > 2.0);
        }
    }
}

TEST_CASE("associated partition on a line") {
    Configuration c = Configuration::all_alive({{0, 0}, {0.5, 0}, {10, 0}});
    Partition p = associated_partition(c, 1.0);
    CHECK(p.blocks == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});

    Configuration chain = Configuration::all_alive({{0, 0}, {0.9, 0}, {1.8, 0}});
    CHECK(associated_partition(chain, 1.0).blocks ==
          std::vector<std::vector<std::size_t>>{{0, 1, 2}});
    CHECK(associated_partition(chain, 0.5).block_count() == 3);
}

TEST_CASE("partition threshold is strict") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}});
    CHECK(associated_partition(c, 1.0).block_count() == 2);  // tie at d0 is not an edge
    CHECK(associated_partition(c, 1.0 + 1e-12).block_count() == 1);
}

TEST_CASE("partition ignores dead particles") {
    Configuration c = Configuration::all_alive({{0, 0}, {0.1, 0}, {5, 0}});
    c.alive[1] = false;
    Partition p = associated_partition(c, 1.0);
    CHECK(p.blocks == std::vector<std::vector<std::size_t>>{{0}, {2}});
}

TEST_CASE("associated partition lemma properties on random configs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> du(0.05, 2.0);
    for (int it = 0; it < 300; ++it) {
        std::size_t n = 2 + rng() % 7;
        Configuration c = random_config(n, rng);
        double d0 = du(rng);
        Partition p0 = associated_partition(c, d0);

        // (a) separation of the partition is at least d0
        if (p0.block_count() >= 2) {
            CHECK(partition_separation(c, p0) >= d0);
        }
        // (b) smaller threshold refines
        double d1 = d0 * du(rng) / 2.0;
        if (d1 > 0 && d1 <= d0) {
            CHECK(associated_partition(c, d1).refines(p0));
        }
        // (d) block dispersion bound R^K < |K|^3 d0^2 / 2
        for (const auto& block : p0.blocks) {
            double rk = local_dispersion(c, block);
            double bound = 0.5 * std::pow(static_cast<double>(block.size()), 3) * d0 * d0;
            CHECK(rk < bound);
        }
    }
}

TEST_CASE("partition at its own separation refines any partition") {
    // (c): for any partition L with >= 2 blocks, K(x, d^L(x)) refines L
    std::mt19937_64 rng(123);
    for (int it = 0; it < 300; ++it) {
        std::size_t n = 3 + rng() % 5;
        Configuration c = random_config(n, rng);
        // random partition into 2..n blocks
        std::size_t nblocks = 2 + rng() % (n - 1);
        std::vector<std::vector<std::size_t>> blocks(nblocks);
        for (std::size_t i = 0; i < n; ++i) blocks[rng() % nblocks].push_back(i);
        Partition L;
        for (auto& b : blocks) {
            if (!b.empty()) L.blocks.push_back(b);
        }
        if (L.block_count() < 2) continue;
        std::sort(L.blocks.begin(), L.blocks.end());
        double sep = partition_separation(c, L);
        if (!(sep > 0.0)) continue;
        CHECK(associated_partition(c, sep).refines(L));
    }
}

TEST_CASE("split_cluster examples") {
    SUBCASE("two tight pairs far apart") {
        Configuration c = Configuration::all_alive({{0, 0}, {0.01, 0}, {5, 0}, {5.01, 0}});
        auto k = split_cluster(c);
        CHECK(k == std::vector<std::size_t>{0, 1});
        double r = local_dispersion(c, full_set(4));
        CHECK(cluster_separation(c, k) >= std::sqrt(2.0 * r / 64.0));
        CHECK(cluster_separation(c, k) == doctest::Approx(4.99));
    }
    SUBCASE("two particles at distance 1") {
        Configuration c = Configuration::all_alive({{0, 0}, {1, 0}});
        auto k = split_cluster(c);
        CHECK(k.size() == 1);
        CHECK(cluster_separation(c, k) == doctest::Approx(1.0));
        CHECK(1.0 >= std::sqrt(0.125));
    }
    SUBCASE("coincident-only configuration is rejected") {
        Configuration c = Configuration::all_alive({{1, 1}, {1, 1}});
        CHECK_THROWS_AS(split_cluster(c), std::invalid_argument);
    }
}

TEST_CASE("split_cluster bound verified against the exhaustive subset oracle") {
    std::mt19937_64 rng(2027);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = 6;
        Configuration c = random_config(n, rng);
        double r = local_dispersion(c, full_set(n));
        double bound = std::sqrt(2.0 * r / std::pow(static_cast<double>(n), 3));

        auto k = split_cluster(c);
        CHECK(k.size() >= 1);
        CHECK(k.size() <= n - 1);
        CHECK(cluster_separation(c, k) >= bound);

        // oracle: brute-force max of d^K over all proper subsets
        double best = 0.0;
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            std::vector<std::size_t> subset;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) subset.push_back(i);
            }
            best = std::max(best, cluster_separation(c, subset));
        }
        CHECK(best >= bound);  // the proposition itself
    }
}

TEST_CASE("good set constant and membership") {
    CHECK(good_set_constant(3) == doctest::Approx(2.0781e-5).epsilon(1e-4));

    SignVector b({1, 1, -1});
    Configuration in = Configuration::all_alive({{0, 0}, {1, 0}, {100, 0}});
    CHECK(in_good_set(in, b));

    Configuration out = Configuration::all_alive({{0, 0}, {1e-9, 0}, {1, 0}});
    CHECK(!in_good_set(out, b));
}

TEST_CASE("good set needs both extremes") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}});
    CHECK_THROWS_AS(in_good_set(c, SignVector({1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(in_good_set(c, SignVector({1, -1})), std::invalid_argument);
}

TEST_CASE("observables are rigid-motion invariant and scale correctly") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        std::size_t n = 4 + rng() % 4;
        Configuration c = random_config(n, rng);
        SignVector b = [&] {
            std::vector<int> s(n, 1);
            s[0] = -1;
            s[1] = -1;
            return SignVector(s);
        }();
        std::vector<std::size_t> k{0, 2, 3};

        double angle = u(rng) * M_PI;
        Vec2 shift{u(rng) * 5, u(rng) * 5};
        double ca = std::cos(angle), sa = std::sin(angle);
        Configuration moved = c;
        for (Vec2& p : moved.positions) {
            p = Vec2{ca * p.x - sa * p.y, sa * p.x + ca * p.y} + shift;
        }

        CHECK(local_dispersion(moved, k) ==
              doctest::Approx(local_dispersion(c, k)).epsilon(1e-10));
        CHECK(cluster_separation(moved, k) ==
              doctest::Approx(cluster_separation(c, k)).epsilon(1e-10));
        SignExtremes e0 = sign_extremes(c, b), e1 = sign_extremes(moved, b);
        CHECK(*e1.d_opp == doctest::Approx(*e0.d_opp).epsilon(1e-10));
        CHECK(*e1.d_same == doctest::Approx(*e0.d_same).epsilon(1e-10));

        double L = 0.25 + 3.0 * std::abs(u(rng));
        Configuration scaled = c;
        for (Vec2& p : scaled.positions) p *= L;
        CHECK(local_dispersion(scaled, k) ==
              doctest::Approx(L * L * local_dispersion(c, k)).epsilon(1e-10));
        CHECK(cluster_separation(scaled, k) ==
              doctest::Approx(L * cluster_separation(c, k)).epsilon(1e-10));
    }
}

TEST_CASE("summarize_cluster bundles the observables") {
    Configuration c = Configuration::all_alive({{0, 0}, {1, 0}, {4, 4}});
    SignVector b({1, -1, 1});
    std::vector<std::size_t> k{0, 1};
    ClusterSummary s = summarize_cluster(c, b, 1.0, k);
    CHECK(s.index_set == k);
    CHECK(s.mean == Vec2{0.5, 0.0});
    CHECK(s.dispersion == doctest::Approx(0.5));
    CHECK(s.bessel_dim == doctest::Approx(0.0));
}
