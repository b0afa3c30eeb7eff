#include "proxcor/sampling_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "proxcor/errors.hpp"
#include "proxcor/random.hpp"

namespace proxcor {

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// log(1 - tanh z) and log(1 + tanh z) without cancellation.
double log_one_minus_tanh(double z) { return std::numbers::ln2 - softplus(2.0 * z); }
double log_one_plus_tanh(double z) { return std::numbers::ln2 - softplus(-2.0 * z); }

double to_z(double x) {
    if (x <= -1.0) return -std::numeric_limits<double>::infinity();
    if (x >= 1.0) return std::numeric_limits<double>::infinity();
    return std::atanh(x);
}

// int_{zlo}^{zhi} fz(z) exp(log_kernel_z(z) - peak) dz, split at a grid around
// the mode (the kernel may be very narrow) and at caller breakpoints; infinite
// ends are mapped tails.
QuadratureResult integrate_kernel(const SoperDist& dist, double peak, const std::function<double(double)>& fz,
                                  double zlo, double zhi, const std::vector<double>& extra, double rel_tol) {
    if (!(zlo < zhi)) return {};
    std::vector<double> cuts;
    for (int k = -12; k <= 12; ++k) cuts.push_back(dist.mode_z() + k * dist.width_z());
    for (double z : extra) cuts.push_back(z);
    if (std::isfinite(zlo)) cuts.push_back(zlo);
    if (std::isfinite(zhi)) cuts.push_back(zhi);
    std::erase_if(cuts, [&](double z) { return !(z >= zlo && z <= zhi) || !std::isfinite(z); });
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double z) {
        const double w = std::exp(dist.log_kernel_z(z) - peak);
        return w == 0.0 ? 0.0 : fz(z) * w;
    };
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    // The kernel peaks at 1 with mass about 2.5 width, so far-tail pieces
    // only need accuracy relative to that, not to their own tiny size.
    opts.abs_tol = 0.01 * rel_tol * dist.width_z();
    QuadratureResult total;
    auto add = [&](const QuadratureResult& r) {
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.evaluations += r.evaluations;
    };
    if (cuts.empty()) {
        // Whole range is one piece with no finite end inside the core grid.
        if (std::isfinite(zlo) && std::isfinite(zhi)) add(integrate(integrand, zlo, zhi, opts));
        else add(integrate_real_line(integrand, opts));
        return total;
    }
    if (!std::isfinite(zlo)) add(integrate_lower_tail(integrand, cuts.front(), opts));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) add(integrate(integrand, cuts[i], cuts[i + 1], opts));
    if (!std::isfinite(zhi)) add(integrate_upper_tail(integrand, cuts.back(), opts));
    return total;
}

} // namespace

double SoperDist::log_kernel_z(double z) const {
    return (m1_ + 1.0) * log_one_minus_tanh(z) + (m2_ + 1.0) * log_one_plus_tanh(z);
}

SoperDist soper_build(double q, int n) {
    if (n < 4) {
        std::ostringstream msg;
        msg << "sampling distribution needs n >= 4 (got " << n << ")";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
    if (!(std::abs(q) < 1.0)) {
        std::ostringstream msg;
        msg << "population correlation must lie in (-1, 1) (got " << q << ")";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
    const double nn = static_cast<double>(n);
    const double q2 = q * q;
    const double k = q2 * (1.0 - q2);
    const double radicand = q2 - k / nn - k * (1.0 + 5.0 * q2) / (2.0 * nn * nn);
    if (radicand < 0.0) {
        std::ostringstream msg;
        msg << "Soper approximation breaks down at q=" << q << ", n=" << n << " (mean radicand " << radicand
            << " < 0); use the Monte Carlo marginal instead";
        throw Error(ErrorKind::ApproximationBreakdown, msg.str());
    }

    SoperDist d;
    d.q_ = q;
    d.n_ = n;
    d.mu_q_ = std::copysign(std::sqrt(radicand), q);
    d.sigma_q_ = (1.0 - q2) / std::sqrt(nn) * (1.0 + (1.0 + 5.5 * q2) / (2.0 * nn));
    d.lambda_ = (1.0 - d.mu_q_ * d.mu_q_) / (d.sigma_q_ * d.sigma_q_);
    if (!(d.lambda_ > 1.0)) {
        std::ostringstream msg;
        msg << "Soper approximation breaks down at q=" << q << ", n=" << n << " (lambda " << d.lambda_
            << " <= 1); use the Monte Carlo marginal instead";
        throw Error(ErrorKind::ApproximationBreakdown, msg.str());
    }
    d.m1_ = 0.5 * (d.lambda_ - 1.0) * (1.0 - d.mu_q_) - 1.0;
    d.m2_ = 0.5 * (d.lambda_ - 1.0) * (1.0 + d.mu_q_) - 1.0;

    const double total_exponent = d.lambda_ - 1.0; // m1 + m2 + 2
    const double t_mode = (d.m2_ - d.m1_) / total_exponent;
    d.mode_z_ = std::atanh(t_mode);
    d.width_z_ = 1.0 / std::sqrt(total_exponent * (1.0 - t_mode * t_mode));
    d.log_kernel_peak_ = d.log_kernel_z(d.mode_z_);

    const auto mass = integrate_kernel(d, d.log_kernel_peak_, [](double) { return 1.0; },
                                       -std::numeric_limits<double>::infinity(),
                                       std::numeric_limits<double>::infinity(), {}, 1e-11);
    d.log_norm_const_ = d.log_kernel_peak_ + std::log(mass.value);
    return d;
}

double soper_pdf(const SoperDist& dist, double q_hat) {
    if (!(q_hat > -1.0 && q_hat < 1.0)) return 0.0;
    return std::exp(dist.m1() * std::log1p(-q_hat) + dist.m2() * std::log1p(q_hat) - dist.log_norm_const());
}

QuadratureResult soper_integrate(const SoperDist& dist, const std::function<double(double)>& f, double lo,
                                 double hi, const std::vector<double>& breakpoints, double rel_tol) {
    std::vector<double> extra;
    extra.reserve(breakpoints.size());
    for (double b : breakpoints) extra.push_back(to_z(b));
    const double peak = dist.log_kernel_z(dist.mode_z());
    auto r = integrate_kernel(dist, peak, [&f](double z) { return f(std::tanh(z)); }, to_z(lo), to_z(hi), extra,
                              rel_tol);
    const double scale = std::exp(peak - dist.log_norm_const());
    r.value *= scale;
    r.abs_error *= scale;
    return r;
}

double soper_cdf(const SoperDist& dist, double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return std::clamp(soper_integrate(dist, [](double) { return 1.0; }, -1.0, x).value, 0.0, 1.0);
}

SoperMoments soper_moments(const SoperDist& dist) {
    const double mean = soper_integrate(dist, [](double x) { return x; }).value;
    const double var = soper_integrate(dist, [mean](double x) { return (x - mean) * (x - mean); }).value;
    return {mean, var};
}

// ---------------------------------------------------------------------------

SoperSampler::SoperSampler(const SoperDist& dist) : grid_(kGridPoints), cdf_(kGridPoints) {
    const double step = 2.0 / static_cast<double>(kGridPoints - 1);
    for (std::size_t i = 0; i < kGridPoints; ++i) grid_[i] = -1.0 + step * static_cast<double>(i);
    grid_.back() = 1.0;
    const double peak = dist.log_kernel_z(dist.mode_z());
    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-300;
    auto kernel = [&](double z) { return std::exp(dist.log_kernel_z(z) - peak); };

    std::vector<double> cell(kGridPoints - 1);
    for (std::size_t i = 0; i + 1 < kGridPoints; ++i) {
        const double zlo = to_z(grid_[i]);
        const double zhi = to_z(grid_[i + 1]);
        if (!std::isfinite(zlo)) cell[i] = integrate_lower_tail(kernel, zhi, opts).value;
        else if (!std::isfinite(zhi)) cell[i] = integrate_upper_tail(kernel, zlo, opts).value;
        else cell[i] = integrate(kernel, zlo, zhi, opts).value;
    }
    double running = 0.0;
    cdf_[0] = 0.0;
    for (std::size_t i = 0; i + 1 < kGridPoints; ++i) {
        running += cell[i];
        cdf_[i + 1] = running;
    }
    for (auto& c : cdf_) c /= running;
    cdf_.back() = 1.0;
}

double SoperSampler::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return grid_.back();
    const auto hi = static_cast<std::size_t>(it - cdf_.begin());
    const std::size_t lo = hi - 1;
    const double span = cdf_[hi] - cdf_[lo];
    const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
    return grid_[lo] + frac * (grid_[hi] - grid_[lo]);
}

double SoperSampler::tabulated_cdf(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const auto hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double frac = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return cdf_[lo] + frac * (cdf_[hi] - cdf_[lo]);
}

double SoperSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    Stream stream(seed, index, salt::soper);
    return quantile(stream.uniform());
}

std::vector<double> soper_sample(const SoperDist& dist, std::size_t count, std::uint64_t seed) {
    const SoperSampler sampler(dist);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = sampler.draw(seed, i);
    return out;
}

// ---------------------------------------------------------------------------

double false_corr_prob_extended(int n, double q_hat, double r, double rel_tol) {
    if (q_hat == 0.0) return 0.5;
    if (q_hat > 0.0) return false_corr_prob(FalseCorrParams(n, q_hat, r), rel_tol).value;
    // u_hat -> -u_hat maps T^n(q_hat) onto T^n(-q_hat) and flips the sign of rho(u_hat, v).
    return 1.0 - false_corr_prob(FalseCorrParams(n, -q_hat, r), rel_tol).value;
}

ProbabilityResult marginal_false_corr_prob(int n, double q, double r, double rel_tol) {
    FalseCorrParams(n, q, r); // domain check on the population values
    const SoperDist dist = soper_build(q, n);
    // h_ext is 1 below -sqrt(1 - r^2), 0 above +sqrt(1 - r^2), and has kinks there.
    const double edge = std::sqrt(1.0 - r * r);
    constexpr double inner_tol = 1e-9;
    auto integrand = [n, r](double q_hat) { return false_corr_prob_extended(n, q_hat, r, inner_tol); };
    const auto result = soper_integrate(dist, integrand, -1.0, 1.0, {-edge, 0.0, edge}, rel_tol);
    return {std::clamp(result.value, 0.0, 1.0), ProbabilityMethod::marginal_quadrature,
            result.abs_error + inner_tol * std::abs(result.value)};
}

} // namespace proxcor
