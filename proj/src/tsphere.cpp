#include "proxcor/tsphere.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proxcor/errors.hpp"
#include "proxcor/parallel.hpp"

namespace proxcor {

namespace {

double checked_q(double q) {
    if (!(std::abs(q) <= 1.0)) {
        std::ostringstream msg;
        msg << "correlation q = " << q << " outside [-1, 1]";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
    return q;
}

constexpr std::size_t kBlock = 4096;

} // namespace

TsphereSpec::TsphereSpec(const NormalizedVector& anchor, double q)
    : TsphereSpec(build_basis(anchor), q) {}

TsphereSpec::TsphereSpec(OrthonormalBasis basis, double q)
    : basis_(std::move(basis)), q_(checked_q(q)), radius_(std::sqrt(std::max(0.0, 1.0 - q * q))) {}

void draw_sphere_point(Stream& stream, double radius, std::span<double> tail) {
    if (tail.empty()) return;
    double sumsq = 0.0;
    do {
        stream.fill_gaussian(tail);
        sumsq = 0.0;
        for (double z : tail) sumsq += z * z;
    } while (sumsq == 0.0);
    const double scale = radius / std::sqrt(sumsq);
    for (auto& z : tail) z *= scale;
}

NormalizedVector draw_tsphere(const TsphereSpec& spec, std::uint64_t seed, std::uint64_t index) {
    Stream stream(seed, index, salt::tsphere);
    std::vector<double> tail(spec.dimension() - 2);
    draw_sphere_point(stream, spec.radius(), tail);
    return from_tail_coordinates(spec.q(), tail, spec.basis());
}

SampleBatch sample_tsphere(const TsphereSpec& spec, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw Error(ErrorKind::InvalidParams, "sample count must be positive");
    std::vector<std::optional<NormalizedVector>> slots(count);
    parallel_blocks(count, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) slots[i] = draw_tsphere(spec, seed, i);
    });
    SampleBatch batch;
    batch.seed = seed;
    batch.vectors.reserve(count);
    for (auto& s : slots) batch.vectors.push_back(std::move(*s));
    return batch;
}

double expected_cross_correlation(double q, double r) {
    checked_q(q);
    checked_q(r);
    return q * r;
}

MeanEstimate cross_correlation_mc(const NormalizedVector& u, const NormalizedVector& v, double q,
                                  std::size_t count, std::uint64_t seed) {
    if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "u and v differ in length");
    if (count < 100) throw Error(ErrorKind::InvalidParams, "need at least 100 samples");
    const TsphereSpec spec(u, q);

    // Per-block (mean, M2) pairs merged in index order keep the result
    // independent of the thread count.
    struct Moments {
        double count = 0.0, mean = 0.0, m2 = 0.0;
    };
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<Moments> partial(blocks);
    parallel_blocks(count, kBlock, [&](std::size_t begin, std::size_t end) {
        Moments m;
        for (std::size_t i = begin; i < end; ++i) {
            const double rho = pearson(draw_tsphere(spec, seed, i), v);
            m.count += 1.0;
            const double delta = rho - m.mean;
            m.mean += delta / m.count;
            m.m2 += delta * (rho - m.mean);
        }
        partial[begin / kBlock] = m;
    });
    Moments total;
    for (const auto& m : partial) {
        const double combined = total.count + m.count;
        const double delta = m.mean - total.mean;
        total.mean += delta * m.count / combined;
        total.m2 += m.m2 + delta * delta * total.count * m.count / combined;
        total.count = combined;
    }
    const double n = static_cast<double>(count);
    const double mean = total.mean;
    const double var = total.m2 / (n - 1.0);
    return {mean, std::sqrt(var / n), count};
}

} // namespace proxcor
