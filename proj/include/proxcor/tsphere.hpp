#pragma once

// Uniform sampling from T^n(q): the (n-3)-sphere of standardized vectors whose
// correlation with an anchor u is exactly q.

#include <cstdint>
#include <span>
#include <vector>

#include "proxcor/geometry.hpp"
#include "proxcor/random.hpp"

namespace proxcor {

class TsphereSpec {
public:
    // q must lie in [-1, 1].
    TsphereSpec(const NormalizedVector& anchor, double q);
    TsphereSpec(OrthonormalBasis basis, double q);

    const NormalizedVector& anchor() const { return basis_.anchor(); }
    const OrthonormalBasis& basis() const { return basis_; }
    double q() const { return q_; }
    double radius() const { return radius_; }
    std::size_t dimension() const { return basis_.dimension(); }

private:
    OrthonormalBasis basis_;
    double q_;
    double radius_;
};

struct SampleBatch {
    std::uint64_t seed = 0;
    std::vector<NormalizedVector> vectors;
};

// Fills `tail` with a point uniform on the sphere of the given radius centred
// at the origin (normalized standard normal draws).
void draw_sphere_point(Stream& stream, double radius, std::span<double> tail);

// Sample `index` of the batch keyed by `seed`.
NormalizedVector draw_tsphere(const TsphereSpec& spec, std::uint64_t seed, std::uint64_t index);

SampleBatch sample_tsphere(const TsphereSpec& spec, std::size_t count, std::uint64_t seed);

// E[rho(u_hat, v)] for u_hat uniform on T^n(q) and rho(u, v) = r.
double expected_cross_correlation(double q, double r);

struct MeanEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

// Monte Carlo mean of rho(u_hat, v) over draws from T^n(q) anchored at u.
MeanEstimate cross_correlation_mc(const NormalizedVector& u, const NormalizedVector& v, double q,
                                  std::size_t count, std::uint64_t seed);

} // namespace proxcor
