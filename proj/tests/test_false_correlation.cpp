#include "doctest.h"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "proxcor/errors.hpp"
#include "proxcor/false_correlation.hpp"
#include "proxcor/random.hpp"

using namespace proxcor;

TEST_CASE("chi-square values") {
    CHECK(chi2_cdf(4, 2.0) == doctest::Approx(1 - 2 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(chi2_pdf(4, 2.0) == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-14));
    CHECK(chi2_cdf(1, 1.0) == doctest::Approx(0.682689492137086).epsilon(1e-13));
    CHECK(chi2_cdf(7, 0.0) == 0.0);
    CHECK(chi2_cdf(7, -3.0) == 0.0);
    CHECK_THROWS_AS(chi2_cdf(0, 1.0), Error);
}

TEST_CASE("chi-square cdf agrees with the regularized incomplete gamma") {
    for (int k : {1, 2, 3, 5, 17, 100, 997, 5000}) {
        for (double t : {1e-6, 0.1, 1.0, 3.0, double(k) * 0.5, double(k), double(k) * 1.7, double(k) + 40}) {
            const double ref = boost::math::gamma_p(0.5 * k, 0.5 * t);
            CHECK(std::abs(chi2_cdf(k, t) - ref) <= 1e-12);
        }
    }
}

TEST_CASE("parameters derive c and the slack") {
    const FalseCorrParams p(20, 0.5, 0.37);
    CHECK(p.c() == doctest::Approx(0.5 * 0.37 / std::sqrt(1 - 0.37 * 0.37)).epsilon(1e-14));
    CHECK(p.slack() == doctest::Approx(1 - 0.25 - p.c_squared()).epsilon(1e-13));
}

TEST_CASE("parameter validation") {
    auto kind = [](int n, double q, double r) {
        try {
            FalseCorrParams(n, q, r);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ParseError;
    };
    CHECK(kind(2, 0.5, 0.3) == ErrorKind::InvalidParams);
    CHECK(kind(10, 0.0, 0.3) == ErrorKind::InvalidParams);
    CHECK(kind(10, 1.1, 0.3) == ErrorKind::InvalidParams);
    CHECK(kind(10, 0.5, 0.0) == ErrorKind::InvalidParams);
    CHECK(kind(10, 0.5, 1.0) == ErrorKind::InvalidParams);
    try {
        FalseCorrParams(10, 0.5, 0.0);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("undefined at r=0") != std::string::npos);
    }
}

TEST_CASE("reference value from an independent incomplete beta") {
    // scipy.special.betainc(0.5, 8.5, c^2 / (1 - q^2)) complement, halved
    const auto res = false_corr_prob(FalseCorrParams(20, 0.5, 0.37));
    CHECK(res.method == ProbabilityMethod::quadrature);
    CHECK(res.value == doctest::Approx(0.17181783887724367).epsilon(1e-10));
}

TEST_CASE("three subjects reduce to an indicator") {
    CHECK(false_corr_prob(FalseCorrParams(3, 0.5, 0.37)).value == 0.5);
    CHECK(false_corr_prob(FalseCorrParams(3, 0.9, 0.6)).value == 0.0);
    CHECK(false_corr_prob(FalseCorrParams(3, 0.8, 0.5999)).value == 0.5);
    CHECK(false_corr_prob(FalseCorrParams(3, 0.8, 0.6001)).value == 0.0);
    CHECK(false_corr_prob(FalseCorrParams(3, 0.8, 0.6)).method == ProbabilityMethod::indicator_n3);
}

TEST_CASE("depends on r only through |r|") {
    for (int n : {4, 9, 50})
        for (double q : {0.2, 0.6})
            for (double r : {0.1, 0.45, 0.7})
                CHECK(false_corr_prob(FalseCorrParams(n, q, r)).value ==
                      doctest::Approx(false_corr_prob(FalseCorrParams(n, q, -r)).value).epsilon(1e-14));
}

TEST_CASE("vanishes when q^2 + r^2 >= 1 and at q = 1") {
    CHECK(false_corr_prob(FalseCorrParams(30, 0.9, 0.6)).value == 0.0);
    CHECK(false_corr_prob(FalseCorrParams(30, 0.8, -0.6)).value == 0.0);
    CHECK(false_corr_prob(FalseCorrParams(30, 1.0, 0.2)).value == 0.0);
}

TEST_CASE("tends to one half as q r vanishes") {
    CHECK(false_corr_prob(FalseCorrParams(10, 0.01, 0.01)).value == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("quadrature matches the closed form on random parameters") {
    Stream s(2024, 0, 50);
    for (int i = 0; i < 200; ++i) {
        const int n = 4 + static_cast<int>(s.uniform() * 500);
        const double q = 0.01 + 0.98 * s.uniform();
        const double r = (s.uniform() < 0.5 ? -1 : 1) * (0.01 + 0.98 * s.uniform());
        const FalseCorrParams p(n, q, r);
        const double a = false_corr_prob(p).value, b = false_corr_prob_closed_form(p).value;
        CHECK(std::abs(a - b) < 1e-8);
    }
}

TEST_CASE("strictly decreasing in n and in q") {
    double prev = 1.0;
    for (int n = 4; n <= 200; ++n) {
        const double h = false_corr_prob(FalseCorrParams(n, 0.5, 0.37)).value;
        CHECK(h < prev);
        prev = h;
    }
    prev = 1.0;
    for (int k = 1; k <= 19; ++k) {
        const double h = false_corr_prob(FalseCorrParams(20, 0.05 * k, 0.2)).value;
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("curve covers the requested range") {
    const auto curve = false_corr_curve(0.5, 0.37, 5, 40, false);
    REQUIRE(curve.size() == 36);
    CHECK(curve.front().n == 5);
    CHECK(curve.back().n == 40);
    CHECK(curve[15].probability == false_corr_prob(FalseCorrParams(20, 0.5, 0.37)).value);
    CHECK_THROWS_AS(false_corr_curve(0.5, 0.37, 10, 5, false), Error);
}
