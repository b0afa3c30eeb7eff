#include "proxcor/false_correlation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "proxcor/errors.hpp"
#include "proxcor/parallel.hpp"
#include "proxcor/quadrature.hpp"
#include "proxcor/sampling_distribution.hpp"

namespace proxcor {

namespace {

void require_dof(int dof) {
    if (dof < 1) {
        std::ostringstream msg;
        msg << "chi-square degrees of freedom must be >= 1, got " << dof;
        throw Error(ErrorKind::InvalidDof, msg.str());
    }
}

// log Gamma(k / 2). Tabulated once (std::lgamma touches the global signgam,
// so it is kept out of the concurrent hot path).
double log_gamma_half(int k) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1 << 16);
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = std::lgamma(0.5 * static_cast<double>(i));
        return t;
    }();
    if (static_cast<std::size_t>(k) < table.size()) return table[static_cast<std::size_t>(k)];
    // Stirling series; the first omitted term is below 1e-17 for a > 32768.
    const double a = 0.5 * k;
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    return (a - 0.5) * std::log(a) - a + 0.5 * std::log(2.0 * std::numbers::pi) +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

// Regularized lower incomplete gamma P(a, x) with a = k / 2.
double gamma_p_half(int k, double x) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double a = 0.5 * k;
    const double log_prefactor = a * std::log(x) - x - log_gamma_half(k);
    constexpr double eps = 1e-17;
    constexpr int max_iter = 1'000'000;

    if (x < a + 1.0) {
        // P = x^a e^-x / Gamma(a + 1) * sum_j x^j / ((a + 1) ... (a + j))
        double term = 1.0 / a;
        double sum = term;
        for (int j = 1; j < max_iter; ++j) {
            term *= x / (a + j);
            sum += term;
            if (term < sum * eps) break;
        }
        return std::min(1.0, std::exp(log_prefactor) * sum);
    }

    // Q = x^a e^-x / Gamma(a) * CF, modified Lentz.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return std::max(0.0, 1.0 - std::exp(log_prefactor) * h);
}

// Integrand support: exp(-s^2 / 2) underflows to zero past s = 38.6.
constexpr double kUpperLimit = 40.0;

} // namespace

double chi2_pdf(int dof, double t) {
    require_dof(dof);
    if (t < 0.0) return 0.0;
    const double a = 0.5 * dof;
    if (t == 0.0) {
        if (dof == 1) return std::numeric_limits<double>::infinity();
        return dof == 2 ? 0.5 : 0.0;
    }
    return std::exp((a - 1.0) * std::log(t) - 0.5 * t - a * std::numbers::ln2 - log_gamma_half(dof));
}

double chi2_cdf(int dof, double t) {
    require_dof(dof);
    if (t <= 0.0) return 0.0;
    return gamma_p_half(dof, 0.5 * t);
}

// ---------------------------------------------------------------------------

FalseCorrParams::FalseCorrParams(int n, double q, double r) : n_(n), q_(q), r_(r) {
    std::ostringstream msg;
    if (n < 3) msg << "n must be >= 3 (got " << n << ")";
    else if (!(q > 0.0 && q <= 1.0)) msg << "q must lie in (0, 1] (got " << q << ")";
    else if (r == 0.0) msg << "false correlation undefined at r=0";
    else if (!(std::abs(r) < 1.0) || 1.0 - r * r < 1e-12) msg << "|r| must be < 1 (got " << r << ")";
    if (!msg.str().empty()) throw Error(ErrorKind::InvalidParams, msg.str());
}

double FalseCorrParams::c_squared() const { return q_ * q_ * r_ * r_ / (1.0 - r_ * r_); }

double FalseCorrParams::c() const { return std::abs(q_ * r_) / std::sqrt(1.0 - r_ * r_); }

double FalseCorrParams::slack() const { return (1.0 - q_ * q_ - r_ * r_) / (1.0 - r_ * r_); }

std::string_view to_string(ProbabilityMethod method) {
    switch (method) {
    case ProbabilityMethod::indicator_n3: return "indicator_n3";
    case ProbabilityMethod::quadrature: return "quadrature";
    case ProbabilityMethod::closed_form: return "closed_form";
    case ProbabilityMethod::marginal_quadrature: return "marginal_quadrature";
    }
    return "unknown";
}

ProbabilityResult false_corr_prob(const FalseCorrParams& params, double rel_tol) {
    const double c2 = params.c_squared();
    const double slack = params.slack();
    if (params.n() == 3) {
        // c^2 <= 1 - q^2, i.e. slack >= 0.
        return {slack >= 0.0 ? 0.5 : 0.0, ProbabilityMethod::indicator_n3, 0.0};
    }
    if (slack <= 0.0) return {0.0, ProbabilityMethod::quadrature, 0.0};

    const int dof = params.n() - 3;
    const double alpha = slack / c2;
    auto integrand = [dof, alpha](double s) {
        const double weight = std::exp(-0.5 * s * s);
        return weight == 0.0 ? 0.0 : weight * chi2_cdf(dof, alpha * s * s);
    };
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = std::numeric_limits<double>::min();
    opts.initial_intervals = 16;
    const auto result = integrate(integrand, 0.0, kUpperLimit, opts);
    const double scale = 0.5 * std::sqrt(2.0 / std::numbers::pi);
    // Truncation beyond kUpperLimit is below the smallest positive double.
    return {std::min(0.5, scale * result.value), ProbabilityMethod::quadrature, scale * result.abs_error};
}

ProbabilityResult false_corr_prob_closed_form(const FalseCorrParams& params) {
    if (params.n() <= 3) throw Error(ErrorKind::InvalidParams, "closed form requires n > 3");
    if (params.slack() <= 0.0) return {0.0, ProbabilityMethod::closed_form, 0.0};
    // chi2_1 >= beta chi2_{n-3}  <=>  Beta(1/2, (n-3)/2) >= beta / (1 + beta) = c^2 / (1 - q^2)
    const double q = params.q();
    const double x = params.c_squared() / (1.0 - q * q);
    const double upper = boost::math::ibetac(0.5, 0.5 * (params.n() - 3), x);
    return {0.5 * upper, ProbabilityMethod::closed_form, 1e-15};
}

std::vector<CurvePoint> false_corr_curve(double q, double r, int n_min, int n_max, bool marginal) {
    if (n_min < 3 || n_max < n_min) {
        std::ostringstream msg;
        msg << "need 3 <= n_min <= n_max (got " << n_min << ", " << n_max << ")";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
    FalseCorrParams(n_min, q, r); // validate once up front
    std::vector<CurvePoint> curve(static_cast<std::size_t>(n_max - n_min + 1));
    parallel_blocks(curve.size(), 1, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const int n = n_min + static_cast<int>(i);
            const double p = marginal ? marginal_false_corr_prob(n, q, r).value
                                      : false_corr_prob(FalseCorrParams(n, q, r)).value;
            curve[i] = {n, p};
        }
    });
    return curve;
}

} // namespace proxcor
