#include "doctest.h"

#include <cmath>

#include "proxcor/errors.hpp"
#include "proxcor/mc_oracle.hpp"
#include "proxcor/sampling_distribution.hpp"

using namespace proxcor;

TEST_CASE("constructed pairs have the requested correlation") {
    for (int n : {3, 8, 40})
        for (double r : {-0.99, -0.497, 0.0, 0.37, 1.0}) {
            const auto [u, v] = construct_pair(n, r, 12);
            CHECK(pearson(u, v) == doctest::Approx(r).epsilon(1e-12));
            CHECK(u.size() == static_cast<std::size_t>(n));
        }
    CHECK(construct_pair(10, 0.3, 1).first == construct_pair(10, 0.3, 1).first);
    CHECK_THROWS_AS(construct_pair(2, 0.3, 1), Error);
    CHECK_THROWS_AS(construct_pair(5, 1.3, 1), Error);
}

TEST_CASE("binomial standard error") {
    CHECK(binomial_stderr(0.5, 10000) == doctest::Approx(0.005).epsilon(1e-14));
    CHECK(binomial_stderr(0.0, 10000) == 0.0);
}

TEST_CASE("Monte Carlo agrees with the analytic probability") {
    for (auto [n, q, r] : {std::tuple{5, 0.3, -0.6}, std::tuple{20, 0.5, 0.37}, std::tuple{100, 0.57, -0.497}}) {
        const auto est = false_corr_prob_mc(n, q, r, 200000, 77);
        const double h = false_corr_prob(FalseCorrParams(n, q, r)).value;
        CHECK(std::abs(est.estimate - h) < 3 * binomial_stderr(h, est.count));
        CHECK(est.count == 200000);
        CHECK(est.seed == 77);
    }
}

TEST_CASE("three subjects give one half or zero") {
    const auto half = false_corr_prob_mc(3, 0.5, 0.37, 100000, 2);
    CHECK(std::abs(half.estimate - 0.5) < 3 * binomial_stderr(0.5, half.count));
    CHECK(false_corr_prob_mc(3, 0.9, 0.6, 10000, 2).estimate == 0.0);
}

TEST_CASE("negative accuracy branch matches the extended probability") {
    const auto est = nonnegative_corr_prob_mc(10, -0.4, -0.5, 200000, 5);
    const double ext = false_corr_prob_extended(10, -0.4, -0.5);
    CHECK(std::abs(est.estimate - ext) < 3 * binomial_stderr(ext, est.count));
}

TEST_CASE("two-stage Monte Carlo agrees with the marginal") {
    const auto est = marginal_false_corr_prob_mc(20, 0.5, 0.37, 100000, 3);
    const double m = marginal_false_corr_prob(20, 0.5, 0.37).value;
    CHECK(std::abs(est.estimate - m) < 3 * binomial_stderr(m, est.count));
}

TEST_CASE("reproducible and validated") {
    CHECK(false_corr_prob_mc(12, 0.4, 0.3, 10000, 9).estimate == false_corr_prob_mc(12, 0.4, 0.3, 10000, 9).estimate);
    CHECK_THROWS_AS(false_corr_prob_mc(12, 0.4, 0.3, 100, 9), Error);
    CHECK_THROWS_AS(false_corr_prob_mc(12, 0.4, 0.0, 10000, 9), Error);
}
