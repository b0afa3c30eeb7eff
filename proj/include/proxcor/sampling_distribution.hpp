#pragma once

// Soper's approximation to the sampling distribution of a sample Pearson
// correlation q_hat computed from n subjects with population correlation q:
//
//   Pr(q_hat | q, n) ~ (1 - q_hat)^m1 (1 + q_hat)^m2
//   m1 = (lambda - 1)(1 - mu)/2 - 1,  m2 = (lambda - 1)(1 + mu)/2 - 1
//   lambda = (1 - mu^2) / sigma^2
//   sigma = (1 - q^2)/sqrt(n) (1 + (1 + 5.5 q^2)/(2n))
//   mu = sqrt(q^2 - k/n - k(1 + 5 q^2)/(2 n^2)),  k = q^2 (1 - q^2)
//
// The normalizing constant is computed numerically.

#include <cstdint>
#include <functional>
#include <vector>

#include "proxcor/false_correlation.hpp"
#include "proxcor/quadrature.hpp"

namespace proxcor {

class SoperDist {
public:
    double q() const { return q_; }
    int n() const { return n_; }
    double mu_q() const { return mu_q_; }
    double sigma_q() const { return sigma_q_; }
    double lambda() const { return lambda_; }
    double m1() const { return m1_; }
    double m2() const { return m2_; }
    double log_norm_const() const { return log_norm_const_; }

    // Log of the unnormalized kernel in z = atanh(q_hat), including the
    // Jacobian: (m1 + 1) log(1 - tanh z) + (m2 + 1) log(1 + tanh z).
    double log_kernel_z(double z) const;
    double mode_z() const { return mode_z_; }
    double width_z() const { return width_z_; }

private:
    friend SoperDist soper_build(double q, int n);
    SoperDist() = default;

    double q_ = 0.0;
    int n_ = 0;
    double mu_q_ = 0.0, sigma_q_ = 0.0, lambda_ = 0.0, m1_ = 0.0, m2_ = 0.0;
    double log_norm_const_ = 0.0;
    double mode_z_ = 0.0, width_z_ = 1.0, log_kernel_peak_ = 0.0;
};

// Throws InvalidParams (n < 4, |q| >= 1) or ApproximationBreakdown (negative
// radicand in mu, or lambda <= 1). mu carries the sign of q.
SoperDist soper_build(double q, int n);

double soper_pdf(const SoperDist& dist, double q_hat);

// Pr(q_hat <= x).
double soper_cdf(const SoperDist& dist, double x);

// E[f(q_hat)] over the Soper density, integrated over [lo, hi] only
// (contributions outside are dropped). `breakpoints` are q_hat values where
// f is not smooth.
QuadratureResult soper_integrate(const SoperDist& dist, const std::function<double(double)>& f,
                                 double lo = -1.0, double hi = 1.0,
                                 const std::vector<double>& breakpoints = {}, double rel_tol = 1e-10);

struct SoperMoments {
    double mean = 0.0;
    double variance = 0.0;
};

SoperMoments soper_moments(const SoperDist& dist);

// Inverse-CDF sampler over a 4097-point tabulated CDF with linear
// interpolation between grid points.
class SoperSampler {
public:
    static constexpr std::size_t kGridPoints = 4097;

    explicit SoperSampler(const SoperDist& dist);

    double quantile(double u) const;
    double draw(std::uint64_t seed, std::uint64_t index) const;
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& cdf() const { return cdf_; }
    // Tabulated CDF evaluated by linear interpolation.
    double tabulated_cdf(double x) const;

private:
    std::vector<double> grid_;
    std::vector<double> cdf_;
};

std::vector<double> soper_sample(const SoperDist& dist, std::size_t count, std::uint64_t seed);

// Sign-error probability extended to every q_hat in (-1, 1):
//   h(n, q_hat, r) for q_hat > 0, 1/2 at 0, 1 - h(n, -q_hat, r) for q_hat < 0.
double false_corr_prob_extended(int n, double q_hat, double r, double rel_tol = 1e-9);

// int h_ext(n, q_hat, r) Pr(q_hat | q, n) dq_hat.
ProbabilityResult marginal_false_corr_prob(int n, double q, double r, double rel_tol = 1e-6);

} // namespace proxcor
