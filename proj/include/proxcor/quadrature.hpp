#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "proxcor/errors.hpp"

namespace proxcor {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_intervals = 4000;
    int initial_intervals = 1;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& other) const { return error < other.error; }
};

template <class F>
Interval gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kronrod_nodes[i];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[i] * fsum;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    if (a == b) return {};
    std::priority_queue<detail::Interval> work;
    double total = 0.0;
    double error = 0.0;
    const int pieces = std::max(1, opts.initial_intervals);
    for (int i = 0; i < pieces; ++i) {
        const double lo = a + (b - a) * i / pieces;
        const double hi = (i + 1 == pieces) ? b : a + (b - a) * (i + 1) / pieces;
        auto iv = detail::gauss_kronrod_15(f, lo, hi);
        total += iv.value;
        error += iv.error;
        work.push(iv);
    }
    int evaluations = 15 * pieces;
    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (error > tolerance()) {
        if (static_cast<int>(work.size()) >= opts.max_intervals) {
            // Roundoff floor: the remaining error estimate cannot shrink below
            // a few ulps of the integral.
            if (error <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(total)) break;
            std::ostringstream msg;
            msg << "no convergence on [" << a << ", " << b << "]: estimate " << total << ", error "
                << error << " after " << work.size() << " intervals";
            throw Error(ErrorKind::QuadratureFailure, msg.str());
        }
        const auto worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval cannot be split further in double precision.
            work.push({worst.a, worst.b, worst.value, 0.0});
            error -= worst.error;
            continue;
        }
        const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
    }

    // Re-sum to shed the drift of the incremental updates.
    double sum = 0.0, err = 0.0;
    while (!work.empty()) {
        sum += work.top().value;
        err += work.top().error;
        work.pop();
    }
    return {sum, err, evaluations};
}

// Integral over the whole real line via x = t / (1 - t^2), t in (-1, 1).
template <class F>
QuadratureResult integrate_real_line(F&& f, const QuadratureOptions& opts = {}) {
    auto mapped = [&f](double t) {
        const double d = 1.0 - t * t;
        if (d <= 0.0) return 0.0;
        const double x = t / d;
        const double jac = (1.0 + t * t) / (d * d);
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * jac;
    };
    return integrate(mapped, -1.0, 1.0, opts);
}

// Integral over [a, +inf) via x = a + t / (1 - t), t in [0, 1).
template <class F>
QuadratureResult integrate_upper_tail(F&& f, double a, const QuadratureOptions& opts = {}) {
    auto mapped = [&f, a](double t) {
        const double d = 1.0 - t;
        if (d <= 0.0) return 0.0;
        const double fx = f(a + t / d);
        return fx == 0.0 ? 0.0 : fx / (d * d);
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

// Integral over (-inf, b] via x = b - t / (1 - t).
template <class F>
QuadratureResult integrate_lower_tail(F&& f, double b, const QuadratureOptions& opts = {}) {
    auto mapped = [&f, b](double t) {
        const double d = 1.0 - t;
        if (d <= 0.0) return 0.0;
        const double fx = f(b - t / d);
        return fx == 0.0 ? 0.0 : fx / (d * d);
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

} // namespace proxcor
