#include <catch2/catch_amalgamated.hpp>

#include "ncdist/munu.hpp"
#include "test_util.hpp"

using namespace ncdist;

TEST_CASE("path weight validation") {
    CHECK_THROWS_AS(PathDiracOperator({}), std::invalid_argument);
    CHECK_THROWS_AS(PathDiracOperator({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PathDiracOperator({1.0, -2.0}), std::invalid_argument);

    // Strongly graded weights whose ratio products leave binary64 range.
    std::vector<double> graded;
    for (int k = 0; k < 17; ++k) {
        graded.push_back(1e9);
        graded.push_back(1e-9);
    }
    CHECK_THROWS_AS(PathDiracOperator(graded), weight_overflow_error);
}

TEST_CASE("mu and nu construction") {
    {
        MuNu mn = build_munu(PathDiracOperator({5.0}));
        CHECK(mn.mu == std::vector<double>{1.0});
        CHECK(mn.nu == std::vector<double>{1.0});
    }
    {
        MuNu mn = build_munu(PathDiracOperator({1, 2, 1, 2, 1}));
        CHECK(mn.mu == std::vector<double>{1.0, 0.5, 0.25});
        CHECK(mn.nu == std::vector<double>{1.0, 2.0, 4.0});
    }
    {
        MuNu mn = build_munu(PathDiracOperator(std::vector<double>(7, 1.0)));
        CHECK(mn.mu == std::vector<double>(4, 1.0));
        CHECK(mn.nu == std::vector<double>(4, 1.0));
    }
}

TEST_CASE("mu/nu recurrences and scale invariance") {
    testutil::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = rng.index(2, 12);
        PathDiracOperator d(rng.weights(n - 1));
        MuNu mn = build_munu(d);
        REQUIRE(mn.mu.size() == (n + 1) / 2);
        REQUIRE(mn.nu.size() == n / 2);
        for (std::size_t k = 1; k < mn.mu.size(); ++k)
            CHECK(mn.mu[k] * d[2 * k] == Catch::Approx(mn.mu[k - 1] * d[2 * k - 1]).epsilon(1e-15));
        for (std::size_t k = 1; k < mn.nu.size(); ++k)
            CHECK(mn.nu[k] * d[2 * k + 1] == Catch::Approx(mn.nu[k - 1] * d[2 * k]).epsilon(1e-15));

        const double c = rng.log_uniform(0.01, 100.0);
        std::vector<double> scaled = d.weights();
        for (double& e : scaled) e *= c;
        MuNu mns = build_munu(PathDiracOperator(scaled));
        for (std::size_t k = 0; k < mn.mu.size(); ++k)
            CHECK(mns.mu[k] == Catch::Approx(mn.mu[k]).epsilon(1e-14));
        for (std::size_t k = 0; k < mn.nu.size(); ++k)
            CHECK(mns.nu[k] == Catch::Approx(mn.nu[k]).epsilon(1e-14));
    }
}

TEST_CASE("truncated mu and nu") {
    testutil::Rng rng(32);
    PathDiracOperator d(rng.weights(9)); // n = 10
    MuNu mn = build_munu(d);

    SECTION("whole range") {
        auto [mu, nu] = truncated_munu(d, 1, 9);
        CHECK(mu == mn.mu);
        CHECK(nu == mn.nu);
    }
    SECTION("middle block [4,5]") {
        auto [mu, nu] = truncated_munu(d, 4, 5);
        CHECK(mu == std::vector<double>{mn.mu[2]});
        CHECK(nu == std::vector<double>{mn.nu[1], mn.nu[2]});
    }
    SECTION("tail block [7,9]") {
        auto [mu, nu] = truncated_munu(d, 7, 9);
        CHECK(mu == std::vector<double>{mn.mu[3], mn.mu[4]});
        CHECK(nu == std::vector<double>{mn.nu[3], mn.nu[4]});
    }
    SECTION("bad range") {
        CHECK_THROWS_AS(truncated_munu(d, 0, 3), std::invalid_argument);
        CHECK_THROWS_AS(truncated_munu(d, 3, 10), std::invalid_argument);
    }
}

TEST_CASE("bilinear identity mu^t T(z) nu = d_1 sum(z)") {
    testutil::Rng rng(33);
    {
        PathDiracOperator d(rng.weights(5));
        CHECK(bilinear_identity_residual(d, std::vector<double>(5, 0.0)) == 0.0);
        std::vector<double> e1(5, 0.0);
        e1[0] = 1.0 / d[1];
        CHECK(bilinear_identity_residual(d, e1) <= 1e-14);
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = rng.index(2, 12);
        PathDiracOperator d(rng.weights(n - 1));
        std::vector<double> z(n - 1);
        double sum = 0.0;
        for (double& e : z) {
            e = rng.uniform();
            sum += e;
        }
        CHECK(bilinear_identity_residual(d, z) <= 1e-10 * (1.0 + d[1] * sum));
    }
}
