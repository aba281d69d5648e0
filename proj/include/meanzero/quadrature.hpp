#pragma once

/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre 16 with adaptive bisection.
 *
 * The generic integration path for weights without a closed-form
 * antiderivative, and the independent cross-check for the closed-form
 * paths. Nodes and weights of the 16-point rule are computed once by
 * Newton iteration on the Legendre recurrence rather than transcribed,
 * so they are correct to the last ulp of what double Newton delivers.
 *
 * Bisection recurses until the two-panel refinement agrees with the
 * single panel within max(abs_tol, rel_tol * |refined|), splitting the
 * tolerance between halves.
 */

#include <array>
#include <cmath>
#include <cstddef>

namespace meanzero {

namespace detail {

struct GaussLegendre16 {
    std::array<double, 16> nodes{};
    std::array<double, 16> weights{};

    GaussLegendre16() {
        constexpr int n = 16;
        constexpr double pi = 3.14159265358979323846;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) {
                    p0 = 1.0;
                    p1 = x;
                    for (int k = 2; k <= n; ++k) {
                        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (x * p1 - p0) / (x * x - 1.0);
                    break;
                }
            }
            nodes[static_cast<std::size_t>(i)] = -x;
            nodes[static_cast<std::size_t>(n - 1 - i)] = x;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[static_cast<std::size_t>(i)] = w;
            weights[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }
};

inline const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule;
    return rule;
}

} // namespace detail

template <typename F>
double gauss16(F&& f, double a, double b) {
    const auto& rule = detail::gl16();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

struct QuadratureControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 40;
};

namespace detail {

template <typename F>
double adaptive_rec(F& f, double a, double b, double whole,
                    const QuadratureControl& ctl, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss16(f, a, mid);
    const double right = gauss16(f, mid, b);
    const double refined = left + right;
    const double err = std::fabs(refined - whole);
    if (depth >= ctl.max_depth ||
        err <= std::fmax(tol, ctl.rel_tol * std::fabs(refined)))
        return refined;
    return adaptive_rec(f, a, mid, left, ctl, 0.5 * tol, depth + 1) +
           adaptive_rec(f, mid, b, right, ctl, 0.5 * tol, depth + 1);
}

} // namespace detail

/// Adaptive Gauss-Legendre 16 on [a, b].
template <typename F>
double adaptive_integrate(F&& f, double a, double b,
                          QuadratureControl ctl = {}) {
    if (a == b) return 0.0;
    const double whole = gauss16(f, a, b);
    return detail::adaptive_rec(f, a, b, whole, ctl, ctl.abs_tol, 0);
}

} // namespace meanzero
