#include "proxcor/mc_oracle.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "proxcor/errors.hpp"
#include "proxcor/false_correlation.hpp"
#include "proxcor/parallel.hpp"
#include "proxcor/random.hpp"
#include "proxcor/sampling_distribution.hpp"
#include "proxcor/tsphere.hpp"

namespace proxcor {

namespace {

constexpr std::size_t kBlock = 8192;

void require_count(std::size_t count, std::size_t minimum) {
    if (count < minimum) {
        std::ostringstream msg;
        msg << "need at least " << minimum << " samples (got " << count << ")";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
}

std::vector<double> centered_gaussian(Stream& stream, std::size_t n) {
    std::vector<double> x(n);
    stream.fill_gaussian(x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (auto& v : x) v -= mean;
    return x;
}

// Counts indices in [0, count) for which `wrong(i)` holds.
template <class Pred>
std::size_t count_events(std::size_t count, Pred wrong) {
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<std::size_t> hits(blocks, 0);
    parallel_blocks(count, kBlock, [&](std::size_t begin, std::size_t end) {
        std::size_t h = 0;
        std::vector<double> tail;
        for (std::size_t i = begin; i < end; ++i) h += wrong(i, tail) ? 1 : 0;
        hits[begin / kBlock] = h;
    });
    return std::accumulate(hits.begin(), hits.end(), std::size_t{0});
}

// v expressed in the rotated frame of u's basis: (0, r, w_3, ..., w_n).
// rho(u_hat, v) = q_hat r + tail . w, so a draw costs O(n) instead of the
// O(n^2) needed to rotate u_hat back.
struct RotatedTarget {
    double along_anchor = 0.0;
    std::vector<double> tail;
};

RotatedTarget rotate_target(const OrthonormalBasis& basis, const NormalizedVector& v) {
    const auto coords = tail_coordinates(v, basis);
    return {coords.q_hat, coords.tail};
}

double rho_from_tail(double q_hat, const std::vector<double>& tail, const RotatedTarget& target) {
    double dot = q_hat * target.along_anchor;
    for (std::size_t j = 0; j < tail.size(); ++j) dot += tail[j] * target.tail[j];
    return dot;
}

bool wrong_sign(double rho, double r) { return r < 0.0 ? rho >= 0.0 : rho < 0.0; }

McEstimate finish(std::size_t hits, std::size_t count, std::uint64_t seed) {
    const double p = static_cast<double>(hits) / static_cast<double>(count);
    return {p, binomial_stderr(p, count), count, seed};
}

} // namespace

std::pair<NormalizedVector, NormalizedVector> construct_pair(int n, double r, std::uint64_t seed) {
    if (n < 3) throw Error(ErrorKind::DimensionTooSmall, "construct_pair needs n >= 3");
    if (!(std::abs(r) <= 1.0)) throw Error(ErrorKind::InvalidParams, "|r| must be <= 1");
    Stream stream(seed, 0, salt::pair);
    const auto nn = static_cast<std::size_t>(n);
    NormalizedVector u = standardize(centered_gaussian(stream, nn));

    std::vector<double> w;
    double norm = 0.0;
    do {
        w = centered_gaussian(stream, nn);
        for (int pass = 0; pass < 2; ++pass) {
            double along = 0.0;
            for (std::size_t i = 0; i < nn; ++i) along += w[i] * u[i];
            for (std::size_t i = 0; i < nn; ++i) w[i] -= along * u[i];
        }
        norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    } while (norm < 1e-8);
    for (auto& x : w) x /= norm;

    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    std::vector<double> v(nn);
    for (std::size_t i = 0; i < nn; ++i) v[i] = r * u[i] + s * w[i];
    if (r == 1.0) return {u, u};
    return {u, NormalizedVector::from_standardized(std::move(v), kConstructionTol)};
}

double binomial_stderr(double p, std::size_t count) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(count));
}

McEstimate false_corr_prob_mc(int n, double q, double r, std::size_t count, std::uint64_t seed) {
    FalseCorrParams(n, q, r);
    require_count(count, 10'000);
    const auto [u, v] = construct_pair(n, r, seed);
    const TsphereSpec spec(u, q);
    const auto target = rotate_target(spec.basis(), v);
    const std::size_t hits = count_events(count, [&](std::size_t i, std::vector<double>& tail) {
        Stream stream(seed, i, salt::tsphere);
        tail.resize(static_cast<std::size_t>(n - 2));
        draw_sphere_point(stream, spec.radius(), tail);
        return wrong_sign(rho_from_tail(q, tail, target), r);
    });
    return finish(hits, count, seed);
}

McEstimate marginal_false_corr_prob_mc(int n, double q, double r, std::size_t count, std::uint64_t seed) {
    FalseCorrParams(n, q, r);
    require_count(count, 10'000);
    const SoperSampler sampler(soper_build(q, n));
    const auto [u, v] = construct_pair(n, r, seed);
    const auto basis = build_basis(u);
    const auto target = rotate_target(basis, v);
    const std::size_t hits = count_events(count, [&](std::size_t i, std::vector<double>& tail) {
        const double q_hat = sampler.draw(seed, i);
        Stream stream(seed, i, salt::tsphere);
        tail.resize(static_cast<std::size_t>(n - 2));
        draw_sphere_point(stream, std::sqrt(std::max(0.0, 1.0 - q_hat * q_hat)), tail);
        return wrong_sign(rho_from_tail(q_hat, tail, target), r);
    });
    return finish(hits, count, seed);
}

McEstimate nonnegative_corr_prob_mc(int n, double q_hat, double r, std::size_t count, std::uint64_t seed) {
    if (!(std::abs(q_hat) <= 1.0)) throw Error(ErrorKind::InvalidParams, "|q_hat| must be <= 1");
    require_count(count, 10'000);
    const auto [u, v] = construct_pair(n, r, seed);
    const TsphereSpec spec(u, q_hat);
    const auto target = rotate_target(spec.basis(), v);
    const std::size_t hits = count_events(count, [&](std::size_t i, std::vector<double>& tail) {
        Stream stream(seed, i, salt::tsphere);
        tail.resize(static_cast<std::size_t>(n - 2));
        draw_sphere_point(stream, spec.radius(), tail);
        return rho_from_tail(q_hat, tail, target) >= 0.0;
    });
    return finish(hits, count, seed);
}

} // namespace proxcor
