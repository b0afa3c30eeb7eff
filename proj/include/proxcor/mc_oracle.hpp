#pragma once

// Brute-force Monte Carlo counterparts of the analytic probabilities. Kept
// deliberately plain: draw, count, divide.

#include <cstdint>
#include <utility>

#include "proxcor/geometry.hpp"

namespace proxcor {

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

// Random standardized pair with rho(u, v) = r: v = r u + sqrt(1 - r^2) w for a
// random standardized w orthogonal to u.
std::pair<NormalizedVector, NormalizedVector> construct_pair(int n, double r, std::uint64_t seed);

// Binomial standard error sqrt(p (1 - p) / count).
double binomial_stderr(double p, std::size_t count);

// Fraction of u_hat ~ Uniform(T^n(q)) whose correlation with v has the wrong
// sign (rho = 0 counts as wrong when r < 0).
McEstimate false_corr_prob_mc(int n, double q, double r, std::size_t count, std::uint64_t seed);

// Same with q_hat ~ Soper(q, n) drawn first, then u_hat ~ Uniform(T^n(q_hat)).
McEstimate marginal_false_corr_prob_mc(int n, double q, double r, std::size_t count, std::uint64_t seed);

// Pr[rho(u_hat, v) >= 0] for u_hat ~ Uniform(T^n(q_hat)) and any q_hat in [-1, 1].
McEstimate nonnegative_corr_prob_mc(int n, double q_hat, double r, std::size_t count, std::uint64_t seed);

} // namespace proxcor
