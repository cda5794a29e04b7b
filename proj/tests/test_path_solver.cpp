#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "ncdist/path_solver.hpp"
#include "test_util.hpp"

using namespace ncdist;

TEST_CASE("solve_block closed forms") {
    SECTION("single edge") {
        BlockSolution s = solve_block(PathDiracOperator({4.0}));
        REQUIRE(s.status == BlockStatus::Viable);
        CHECK(s.z[0] == Catch::Approx(0.25).epsilon(1e-15));
        CHECK(s.value == Catch::Approx(0.25).epsilon(1e-15));
    }
    SECTION("two edges") {
        const double d1 = 3.0, d2 = 4.0;
        BlockSolution s = solve_block(PathDiracOperator({d1, d2}));
        REQUIRE(s.status == BlockStatus::Viable);
        const double r = std::sqrt(d1 * d1 + d2 * d2);
        CHECK(s.z[0] == Catch::Approx(d2 / (d1 * r)).epsilon(1e-14));
        CHECK(s.z[1] == Catch::Approx(d1 / (d2 * r)).epsilon(1e-14));
        CHECK(s.value == Catch::Approx(std::sqrt(1.0 + (d1 / d2) * (d1 / d2)) / d1).epsilon(1e-14));
    }
    SECTION("middle weight too heavy: not viable") {
        BlockSolution s = solve_block(PathDiracOperator({1, 2, 1}));
        CHECK(s.status == BlockStatus::Negative);
    }
}

TEST_CASE("pattern enumeration") {
    CHECK(enumerate_patterns(2) == std::vector<ZeroPattern>{{}});
    CHECK(enumerate_patterns(4) == std::vector<ZeroPattern>{{{}}, {{2}}});

    auto p6 = enumerate_patterns(6);
    std::set<std::vector<std::size_t>> got;
    for (const auto& p : p6) got.insert(p.zeros);
    CHECK(got == std::set<std::vector<std::size_t>>{{}, {2}, {3}, {4}, {2, 4}});

    // Fibonacci count: P(n) = P(n-1) + P(n-2), P(2) = P(3) = 1.
    std::size_t a = 1, b = 1;
    for (std::size_t n = 4; n <= 18; ++n) {
        const std::size_t expected = a + b;
        std::size_t count = 0;
        enumerate_patterns(n, [&](const ZeroPattern& p) {
            ++count;
            for (std::size_t k = 0; k < p.zeros.size(); ++k) {
                CHECK(p.zeros[k] >= 2);
                CHECK(p.zeros[k] <= n - 2);
                if (k) CHECK(p.zeros[k] >= p.zeros[k - 1] + 2);
            }
        });
        CHECK(count == expected);
        a = b;
        b = expected;
    }
}

TEST_CASE("solve_path reproduces the small-path examples") {
    struct Case {
        std::vector<double> d;
        double distance;
        std::vector<std::size_t> pattern;
    };
    const Case cases[] = {
        {{3, 2, 1}, 4.0 / 3.0, {2}},
        {{2, 1, 1, 1, 1}, 3.0 * std::sqrt(3.0) / 2.0, {}},
        {{1, 2, 1, 2, 1}, 3.0, {2, 4}},
        {{3, 20, 100, 10, 1000}, std::sqrt(409.0) / 60.0 + std::sqrt(10001.0) / 1000.0, {3}},
        {{1, 3, 2, 1, 1}, 1.0 + std::sqrt(2.5), {2}},
        {{1, 1, 2, 3, 1}, 1.0 + std::sqrt(2.5), {4}},
    };
    for (const auto& c : cases) {
        DistanceReport rep = solve_path(PathDiracOperator(c.d));
        CHECK(rep.distance == Catch::Approx(c.distance).margin(1e-12));
        CHECK(rep.pattern.zeros == c.pattern);
        CHECK(rep.verification.passed);
        CHECK(rep.distance <= rep.geodesic + 1e-10);
    }

    DistanceReport r321 = solve_path(PathDiracOperator({3, 2, 1}));
    CHECK(r321.optimal_z[0] == Catch::Approx(1.0 / 3.0).margin(1e-14));
    CHECK(r321.optimal_z[1] == 0.0);
    CHECK(r321.optimal_z[2] == Catch::Approx(1.0).margin(1e-14));
    CHECK(r321.optimal_a.back() == 0.0);
    CHECK(r321.optimal_a[0] == Catch::Approx(4.0 / 3.0).margin(1e-14));

    DistanceReport r12121 = solve_path(PathDiracOperator({1, 2, 1, 2, 1}));
    CHECK(r12121.optimal_z == std::vector<double>{1, 0, 1, 0, 1});
}

TEST_CASE("all-candidates listing for d = (1,2,1,2,1)") {
    SolveOptions opts;
    opts.collect_all = true;
    DistanceReport rep = solve_path(PathDiracOperator({1, 2, 1, 2, 1}), opts);
    REQUIRE(rep.all_candidates.size() == 2);
    std::vector<double> objectives;
    for (const auto& c : rep.all_candidates) objectives.push_back(c.objective);
    std::sort(objectives.begin(), objectives.end());
    CHECK(objectives[0] == Catch::Approx(std::sqrt(5.0)).margin(1e-12));
    CHECK(objectives[1] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("fastpath closed forms") {
    {
        auto rep = solve_path_fastpath(PathDiracOperator({1, 1, 1}));
        REQUIRE(rep);
        CHECK(rep->distance == Catch::Approx(2.0).margin(1e-14));
        CHECK(rep->optimal_z == std::vector<double>{1, 0, 1});
    }
    {
        auto rep = solve_path_fastpath(PathDiracOperator({1, 1, 1, 1}));
        REQUIRE(rep);
        CHECK(rep->distance == Catch::Approx(std::sqrt(6.0)).margin(1e-13));
    }
    {
        auto rep = solve_path_fastpath(PathDiracOperator({1, 1}));
        REQUIRE(rep);
        CHECK(rep->distance == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
    }
    CHECK(!solve_path_fastpath(PathDiracOperator({1, 2, 1, 2, 1})));
}

TEST_CASE("fastpath agrees with full enumeration where it applies") {
    testutil::Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng.index(2, 5);
        PathDiracOperator d(rng.weights(n - 1));
        auto fast = solve_path_fastpath(d);
        REQUIRE(fast);
        DistanceReport full = solve_path(d);
        CHECK(fast->distance ==
              Catch::Approx(full.distance).margin(1e-12 * (1.0 + full.distance)));
    }
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = rng.index(6, 13);
        const double c = rng.log_uniform(0.1, 10.0);
        PathDiracOperator d(std::vector<double>(n - 1, c));
        auto fast = solve_path_fastpath(d);
        REQUIRE(fast);
        DistanceReport full = solve_path(d);
        CHECK(fast->distance ==
              Catch::Approx(full.distance).margin(1e-12 * (1.0 + full.distance)));
    }
}

TEST_CASE("verify_candidate") {
    PathDiracOperator d({1, 2, 1, 2, 1});
    DistanceReport rep = solve_path(d);
    ViableCandidate cand;
    cand.pattern = rep.pattern;
    cand.z = rep.optimal_z;

    SECTION("true optimizer passes with tiny residuals") {
        VerificationRecord rec = verify_candidate(d, cand);
        CHECK(rec.passed);
        CHECK(rec.eigen_residual <= 1e-12);
        CHECK(rec.norm_deviation <= 1e-12);
        CHECK(rec.bj_residual <= 1e-12);
    }
    SECTION("perturbed candidate is rejected") {
        cand.z[0] += 1e-3;
        VerificationRecord rec = verify_candidate(d, cand);
        CHECK(!rec.passed);
        CHECK(rec.norm_deviation > 1e-9);
    }
    SECTION("n = 2 passes trivially") {
        PathDiracOperator d2({7.0});
        DistanceReport r2 = solve_path(d2);
        ViableCandidate c2;
        c2.pattern = r2.pattern;
        c2.z = r2.optimal_z;
        CHECK(verify_candidate(d2, c2).passed);
    }
}

TEST_CASE("homogeneity, reversal, and pruning soundness") {
    testutil::Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = rng.index(2, 10);
        PathDiracOperator d(rng.weights(n - 1));
        DistanceReport rep = solve_path(d);

        const double c = rng.log_uniform(0.1, 10.0);
        std::vector<double> scaled = d.weights();
        for (double& e : scaled) e *= c;
        DistanceReport reps = solve_path(PathDiracOperator(scaled));
        CHECK(reps.distance == Catch::Approx(rep.distance / c).epsilon(1e-12));

        std::vector<double> rev(d.weights().rbegin(), d.weights().rend());
        DistanceReport repr = solve_path(PathDiracOperator(rev));
        CHECK(repr.distance == Catch::Approx(rep.distance).epsilon(1e-12));

        SolveOptions noprune;
        noprune.prune = false;
        DistanceReport repn = solve_path(d, noprune);
        CHECK(repn.distance == Catch::Approx(rep.distance).epsilon(1e-13));

        CHECK(rep.distance <= rep.geodesic + 1e-10);
        CHECK(rep.verification.passed);
    }
}

TEST_CASE("refinement never improves a viable pattern") {
    testutil::Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.index(4, 11);
        PathDiracOperator d(rng.weights(n - 1));
        SolveOptions opts;
        opts.prune = false;
        opts.collect_all = true;
        DistanceReport rep = solve_path(d, opts);
        const auto& cands = rep.all_candidates;
        for (std::size_t i = 0; i < cands.size(); ++i)
            for (std::size_t j = 0; j < cands.size(); ++j) {
                if (i == j) continue;
                const auto& zi = cands[i].pattern.zeros;
                const auto& zj = cands[j].pattern.zeros;
                if (std::includes(zj.begin(), zj.end(), zi.begin(), zi.end()) && zi != zj)
                    CHECK(cands[i].objective >=
                          cands[j].objective - 1e-12 * (1.0 + cands[i].objective));
            }
    }
}

TEST_CASE("prerefine inequality: whole path dominates any split") {
    testutil::Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.index(4, 13);
        PathDiracOperator d(rng.weights(n - 1));
        MuNu mn = build_munu(d);
        const double whole = mn.mu_norm() * mn.nu_norm() / d[1];
        for (std::size_t p = 2; p <= n - 2; ++p) {
            MuNu m1 = build_munu(d.slice(1, p - 1));
            MuNu m2 = build_munu(d.slice(p + 1, n - 1));
            const double split = m1.mu_norm() * m1.nu_norm() / d[1] +
                                 m2.mu_norm() * m2.nu_norm() / d[p + 1];
            CHECK(whole >= split - 1e-12 * (1.0 + whole));
        }
    }
}
