#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/QR>

#include "proxcor/errors.hpp"
#include "proxcor/tsphere.hpp"

using namespace proxcor;

namespace {

NormalizedVector random_vector(std::size_t n, std::uint64_t seed) {
    Stream s(seed, 0, 99);
    std::vector<double> raw(n);
    s.fill_gaussian(raw);
    return standardize(raw);
}

} // namespace

TEST_CASE("every draw lies on the sphere") {
    const auto u = random_vector(15, 1);
    const TsphereSpec spec(u, 0.42);
    const auto batch = sample_tsphere(spec, 500, 17);
    REQUIRE(batch.vectors.size() == 500);
    for (const auto& x : batch.vectors) {
        double sum = 0, ss = 0;
        for (double v : x.values()) sum += v, ss += v * v;
        CHECK(std::abs(sum) < 1e-12);
        CHECK(std::abs(ss - 1) < 1e-12);
        CHECK(std::abs(pearson(x, u) - 0.42) < 1e-10);
    }
}

TEST_CASE("q = 1 returns the anchor, q = -1 its negation") {
    const auto u = random_vector(6, 2);
    const auto a = draw_tsphere(TsphereSpec(u, 1.0), 3, 0);
    const auto b = draw_tsphere(TsphereSpec(u, -1.0), 3, 0);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(a[i] == doctest::Approx(u[i]).epsilon(1e-12));
        CHECK(b[i] == doctest::Approx(-u[i]).epsilon(1e-12));
    }
}

TEST_CASE("three subjects give exactly two points") {
    const auto u = standardize(std::vector<double>{.816, -.408, -.408});
    const TsphereSpec spec(u, std::cos(std::numbers::pi / 6));
    const auto batch = sample_tsphere(spec, 200, 5);
    std::set<std::pair<long, long>> seen;
    for (const auto& x : batch.vectors) {
        const bool first = std::abs(x[0] - .707) < 2e-3 && std::abs(x[1]) < 2e-3 && std::abs(x[2] + .707) < 2e-3;
        const bool second = std::abs(x[0] - .707) < 2e-3 && std::abs(x[1] + .707) < 2e-3 && std::abs(x[2]) < 2e-3;
        CHECK((first || second));
        seen.insert({std::lround(x[1] * 1000), std::lround(x[2] * 1000)});
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("sampling is reproducible and index addressed") {
    const auto u = random_vector(8, 4);
    const TsphereSpec spec(u, 0.3);
    const auto a = sample_tsphere(spec, 300, 9);
    const auto b = sample_tsphere(spec, 300, 9);
    CHECK(a.vectors == b.vectors);
    CHECK(draw_tsphere(spec, 9, 123) == a.vectors[123]);
    const auto c = sample_tsphere(spec, 300, 10);
    CHECK(!(c.vectors[0] == a.vectors[0]));
}

TEST_CASE("expected cross correlation is q r") {
    CHECK(expected_cross_correlation(0.866, -0.259) == doctest::Approx(-0.224).epsilon(1e-3));
    CHECK(expected_cross_correlation(std::cos(std::numbers::pi / 6), std::cos(7 * std::numbers::pi / 12)) ==
          doctest::Approx(-0.2241438680420134).epsilon(1e-12));
}

TEST_CASE("Monte Carlo mean matches q r in the figure example") {
    const auto u = standardize(std::vector<double>{.816, -.408, -.408});
    const auto v = standardize(std::vector<double>{-.211, -.577, .788});
    const auto est = cross_correlation_mc(u, v, std::cos(std::numbers::pi / 6), 20000, 1);
    const double target = std::cos(std::numbers::pi / 6) * pearson(u, v);
    CHECK(std::abs(est.mean - target) < 3 * est.stderr_);
    // The two points give cos 135 and cos 75.
    CHECK(target == doctest::Approx(0.5 * (std::cos(3 * std::numbers::pi / 4) + std::cos(5 * std::numbers::pi / 12))).epsilon(2e-3));
}

TEST_CASE("sample moments do not depend on the completion of the basis") {
    // Rotate rows 2..n-1 of the basis by a random orthogonal matrix; the
    // uniform law on the sphere is invariant so q r must still be recovered.
    const std::size_t n = 12;
    const auto u = random_vector(n, 21), v = random_vector(n, 22);
    const auto base = build_basis(u);
    Stream s(5, 0, 98);
    Eigen::MatrixXd g(n - 2, n - 2);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = s.gaussian();
    const Eigen::MatrixXd rot = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::MatrixXd rows = base.rows();
    rows.bottomRows(n - 2) = rot * base.rows().bottomRows(n - 2);
    const auto alt = OrthonormalBasis::from_rows(rows, u);
    const TsphereSpec spec(alt, 0.6);
    const auto batch = sample_tsphere(spec, 40000, 3);
    double sum = 0, ss = 0;
    for (const auto& x : batch.vectors) {
        const double rho = pearson(x, v);
        sum += rho, ss += rho * rho;
    }
    const double mean = sum / 40000, sd = std::sqrt(ss / 40000 - mean * mean);
    CHECK(std::abs(mean - 0.6 * pearson(u, v)) < 3 * sd / std::sqrt(40000.0));
}

TEST_CASE("tsphere rejects invalid parameters") {
    const auto u = random_vector(5, 1);
    CHECK_THROWS_AS(TsphereSpec(u, 1.5), Error);
    CHECK_THROWS_AS(sample_tsphere(TsphereSpec(u, 0.5), 0, 1), Error);
    CHECK_THROWS_AS(cross_correlation_mc(u, random_vector(6, 1), 0.5, 1000, 1), Error);
}
