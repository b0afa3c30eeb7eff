#include "doctest.h"

#include <cmath>

#include "proxcor/coverage.hpp"
#include "proxcor/ensemble_synth.hpp"
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

std::vector<EnsembleRecord> uniform_records(const NormalizedVector& u, double q, std::size_t m, std::uint64_t seed) {
    const auto batch = sample_tsphere(TsphereSpec(u, q), m, seed);
    std::vector<EnsembleRecord> out;
    for (std::size_t j = 0; j < m; ++j) out.push_back(make_record("d" + std::to_string(j), "u", batch.vectors[j], u));
    return out;
}

} // namespace

TEST_CASE("records carry their correlation with the anchor") {
    const auto u = random_vector(10, 1), x = random_vector(10, 2);
    const auto rec = make_record("a", "t", x, u);
    CHECK(rec.q_hat == pearson(x, u));
}

TEST_CASE("band filter keeps order and rejects empty bands") {
    const auto u = random_vector(20, 3);
    std::vector<EnsembleRecord> recs;
    for (double q : {0.1, 0.5, 0.3, 0.7}) recs.push_back(uniform_records(u, q, 1, std::uint64_t(q * 100))[0]);
    const auto kept = filter_band(recs, 0.25, 0.6);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].q_hat == doctest::Approx(0.5));
    CHECK(kept[1].q_hat == doctest::Approx(0.3));
    CHECK_THROWS_AS(filter_band(recs, 0.8, 0.9), Error);
    CHECK_THROWS_AS(filter_band(recs, 0.6, 0.2), Error);
}

TEST_CASE("uniform ensemble trace matches one minus q squared") {
    const auto u = random_vector(30, 4);
    const auto recs = uniform_records(u, 0.6, 400, 5);
    // Each tail coordinate has variance (1 - q^2)/(n - 2); the trace sums n - 2 of them.
    CHECK(covariance_trace(recs, u) == doctest::Approx(1 - 0.36).epsilon(0.03));
    std::vector<std::vector<double>> tails;
    const auto b = build_basis(u);
    for (const auto& r : recs) tails.push_back(tail_coordinates(r.vector, b).tail);
    CHECK(tail_covariance_trace(tails) == doctest::Approx(covariance_trace(recs, b)).epsilon(1e-12));
}

TEST_CASE("disc projection stays inside the radius bound") {
    const auto u = random_vector(25, 6);
    SynthConfig cfg{u};
    cfg.clusters = 3;
    cfg.count_per_cluster = 8;
    cfg.seed = 2;
    const auto recs = generate_ensemble(cfg);
    const auto disc = disc_projection(recs, u);
    REQUIRE(disc.points.size() == recs.size());
    for (const auto& [a, b] : disc.points) CHECK(std::hypot(a, b) <= disc.radius_bound + 1e-12);
    CHECK(disc.explained_variance.first >= disc.explained_variance.second);
    CHECK(disc.explained_variance.second >= 0);
    CHECK(disc.explained_variance.first + disc.explained_variance.second <= covariance_trace(recs, u) + 1e-12);
}

TEST_CASE("identical records project to the origin") {
    const auto u = random_vector(8, 7), x = random_vector(8, 8);
    std::vector<EnsembleRecord> recs(4, make_record("a", "t", x, u));
    const auto disc = disc_projection(recs, u);
    for (const auto& [a, b] : disc.points) CHECK((a == 0.0 && b == 0.0));
    CHECK(disc.explained_variance.first == 0.0);
    CHECK(covariance_trace(recs, u) == 0.0);
}

TEST_CASE("too few records") {
    const auto u = random_vector(8, 7);
    const auto recs = uniform_records(u, 0.5, 2, 1);
    CHECK_THROWS_AS(disc_projection(recs, u), Error);
    CHECK_THROWS_AS(coverage_significance(recs, u, 999, 1), Error);
    CHECK_THROWS_AS(covariance_trace({recs[0]}, u), Error);
}

TEST_CASE("clustered ensembles are significant, uniform ones are not") {
    const auto u = random_vector(40, 9);
    SynthConfig cfg{u};
    cfg.clusters = 2;
    cfg.count_per_cluster = 10;
    cfg.seed = 3;
    const auto clustered = coverage_significance(generate_ensemble(cfg), u, 999, 1);
    CHECK(clustered.p_value < 0.01);
    CHECK(clustered.p_value >= 1.0 / 1000);
    CHECK(clustered.tags.size() == 2);
    CHECK(clustered.tags.at("cluster-0").count == 10);

    const auto uniform = coverage_significance(uniform_records(u, 0.6, 20, 11), u, 999, 1);
    CHECK(uniform.p_value > 0.05);
    CHECK(uniform.null_mean == doctest::Approx(uniform.expected_null_trace).epsilon(0.02));
    CHECK(uniform.null_traces.size() == 999);
}

TEST_CASE("significance is reproducible") {
    const auto u = random_vector(12, 10);
    const auto recs = uniform_records(u, 0.4, 6, 2);
    const auto a = coverage_significance(recs, u, 999, 42);
    const auto b = coverage_significance(recs, u, 999, 42);
    CHECK(a.null_traces == b.null_traces);
    CHECK(a.p_value == b.p_value);
    CHECK_THROWS_AS(coverage_significance(recs, u, 100, 42), Error);
}

TEST_CASE("null ensembles keep each record's correlation") {
    const auto u = random_vector(15, 12);
    std::vector<EnsembleRecord> recs;
    for (double q : {0.2, 0.5, 0.8}) recs.push_back(uniform_records(u, q, 1, std::uint64_t(q * 10))[0]);
    const auto null = null_ensemble(recs, build_basis(u), 5, 0);
    REQUIRE(null.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) CHECK(pearson(null[j].vector, u) == doctest::Approx(recs[j].q_hat).epsilon(1e-10));
}

TEST_CASE("minimum pairwise correlation") {
    const auto u = random_vector(6, 13);
    std::vector<double> neg(u.values().begin(), u.values().end());
    for (auto& x : neg) x = -x;
    const std::vector<EnsembleRecord> recs{make_record("a", "t", u, u), make_record("b", "t", standardize(neg), u),
                                           make_record("c", "t", u, u)};
    CHECK(min_pairwise_corr(recs) == doctest::Approx(-1.0));
}
