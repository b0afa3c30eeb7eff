#pragma once

// Probability that a correlation computed from a proxy measurement has the
// opposite sign to the true correlation.

#include <string_view>
#include <utility>
#include <vector>

namespace proxcor {

double chi2_pdf(int dof, double t);

// Regularized lower incomplete gamma P(dof/2, t/2); 0 for t <= 0.
double chi2_cdf(int dof, double t);

// (n, q, r) for the sign-error probability. The offset c = |q r| / sqrt(1 - r^2)
// is always derived, never stored.
class FalseCorrParams {
public:
    // Requires n >= 3, q in (0, 1], r != 0, 1 - r^2 >= 1e-12.
    FalseCorrParams(int n, double q, double r);

    int n() const { return n_; }
    double q() const { return q_; }
    double r() const { return r_; }
    double c() const;
    double c_squared() const;
    // 1 - q^2 - c^2, evaluated as (1 - q^2 - r^2) / (1 - r^2).
    double slack() const;

private:
    int n_;
    double q_;
    double r_;
};

enum class ProbabilityMethod { indicator_n3, quadrature, closed_form, marginal_quadrature };

std::string_view to_string(ProbabilityMethod method);

struct ProbabilityResult {
    double value = 0.0;
    ProbabilityMethod method = ProbabilityMethod::quadrature;
    double abs_error_bound = 0.0;
};

// Indicator for n = 3; otherwise
//   1/2 sqrt(2/pi) int_0^inf exp(-s^2/2) F_{n-3}(alpha s^2) ds,  alpha = slack / c^2,
// which is the chi-square integral after t = s^2.
ProbabilityResult false_corr_prob(const FalseCorrParams& params, double rel_tol = 1e-9);

// Independent route through the Beta(1/2, (n-3)/2) law of chi2_1 / (chi2_1 + chi2_{n-3}).
// Requires n > 3.
ProbabilityResult false_corr_prob_closed_form(const FalseCorrParams& params);

struct CurvePoint {
    int n = 0;
    double probability = 0.0;
};

std::vector<CurvePoint> false_corr_curve(double q, double r, int n_min, int n_max, bool marginal);

} // namespace proxcor
