#pragma once

/**
 * @file sharp_bounds.hpp
 * @brief The sharp bounds on primitives of mean-zero bounded functions,
 *        the proof envelopes, and the weighted integral they bound.
 *
 * For f with m <= f <= M, int f = 0, and nondecreasing phi:
 *
 *   int_0^1 phi(|J(f)|) dx  <=  K(phi, h*)          (main bound)
 *   ||J(f)||_p              <=  h* / (p+1)^(1/p)    (power weights)
 *   exp(int log|J(f)|)      <=  h* / e              (log limit)
 *   ||J(f)||_inf            <=  h*
 *
 * with h* = -mM/(M-m). The historical comparison bound on int J^2
 * (the one these results sharpen) is kept as a pure formula evaluator.
 *
 * int phi(|J|) is computed by exact segment decomposition: J is
 * piecewise linear, each segment is split at its zero crossing, and
 * on a sign-constant piece the substitution u = |J(x)| reduces the
 * integral to the weight's prefix integral divided by the slope.
 * Analytic weights therefore integrate in closed form; table weights
 * go through adaptive Gauss-Legendre on the same pieces.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "meanzero/bounds.hpp"
#include "meanzero/kfunctional.hpp"
#include "meanzero/piecewise_linear.hpp"
#include "meanzero/quadrature.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"

namespace meanzero {

/// K(phi, h*): the sharp bound on int phi(|J(f)|).
inline double theorem1_bound(const Bounds& b, const MonotoneWeight& w) {
    if (w.domain_cap() < b.peak())
        throw std::domain_error("weight domain too small: need phi on [0, h*]");
    return k_functional(w, b.peak());
}

/// h* / (p+1)^(1/p); equals theorem1_bound(b, power(p))^(1/p).
inline double corollary1_bound(const Bounds& b, double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("corollary1 requires finite p > 0");
    return b.peak() * std::exp(-std::log1p(p) / p);
}

/// h* / e: the geometric-mean bound, the p -> 0 limit of corollary1.
inline double corollary2_bound(const Bounds& b) {
    return b.peak() / std::numbers::e_v<double>;
}

/// h*: the uniform bound on |J(f)|.
inline double proposition1_bound(const Bounds& b) { return b.peak(); }

/// The earlier displayed bound on int J^2, for comparison only.
inline double perfetti_bound(const Bounds& b) {
    const double m = b.m(), M = b.M();
    const double span = M - m;
    return (-m * M) / (6.0 * span * span) * (3.0 * M * M - 8.0 * m * M + 3.0 * m * m);
}

/// Pointwise ceiling for J(f): the tent min(Mx, -m(1-x)) with apex
/// (c0, h*).
inline PiecewiseLinear envelope_pos(const Bounds& b) {
    return PiecewiseLinear({0.0, b.crossover0(), 1.0}, {0.0, b.peak(), 0.0});
}

/// Pointwise ceiling for -J(f): the tent min(-mx, M(1-x)) with apex
/// (c1, h*).
inline PiecewiseLinear envelope_neg(const Bounds& b) {
    return PiecewiseLinear({0.0, b.crossover1(), 1.0}, {0.0, b.peak(), 0.0});
}

enum class IntegrationPath {
    automatic,   ///< closed form for analytic weights, quadrature for tables
    closed_form, ///< force the prefix-integral route (analytic weights only)
    quadrature,  ///< force adaptive Gauss-Legendre (refuses shifted_log(0))
};

namespace detail {

struct SignPiece {
    double x0, x1; ///< subinterval of [0,1]
    double u0, u1; ///< |J| at the ends
    double slope;  ///< slope of J on the parent segment
    double j0;     ///< J at x0 (signed), for quadrature reconstruction
};

/// Splits the segments of J at zero crossings into sign-constant pieces.
inline std::vector<SignPiece> sign_pieces(const PiecewiseLinear& J) {
    std::vector<SignPiece> pieces;
    const auto& xs = J.nodes();
    const auto& js = J.values();
    pieces.reserve(xs.size() + 4);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double x0 = xs[i], x1 = xs[i + 1];
        const double j0 = js[i], j1 = js[i + 1];
        const double s = (j1 - j0) / (x1 - x0);
        if (j0 * j1 < 0.0) {
            const double xz = x0 + j0 / (j0 - j1) * (x1 - x0);
            if (x0 < xz && xz < x1) {
                pieces.push_back({x0, xz, std::fabs(j0), 0.0, s, j0});
                pieces.push_back({xz, x1, 0.0, std::fabs(j1), s, 0.0});
                continue;
            }
        }
        pieces.push_back({x0, x1, std::fabs(j0), std::fabs(j1), s, j0});
    }
    return pieces;
}

inline double integrate_piece_closed(const SignPiece& p, const MonotoneWeight& w) {
    if (p.u0 == p.u1 || p.slope == 0.0) {
        const double phi = w(p.u0);
        return (p.x1 - p.x0) * phi; // -inf * width stays -inf
    }
    const double lo = std::fmin(p.u0, p.u1);
    const double hi = std::fmax(p.u0, p.u1);
    return w.integral(lo, hi) / std::fabs(p.slope);
}

inline double integrate_piece_quadrature(const SignPiece& p, const MonotoneWeight& w,
                                         const QuadratureControl& ctl) {
    if (p.u0 == p.u1 || p.slope == 0.0)
        return (p.x1 - p.x0) * w(p.u0);
    const double x0 = p.x0, j0 = p.j0, s = p.slope;
    return adaptive_integrate(
        [&](double x) { return w(std::fabs(j0 + s * (x - x0))); }, p.x0, p.x1, ctl);
}

} // namespace detail

/**
 * int_0^1 phi(|J|) dx for an already-computed primitive J.
 *
 * Returns -inf (which trivially satisfies any upper bound) exactly when
 * phi = shifted_log(0) and J vanishes on a set of positive measure;
 * the isolated zeros at segment ends are integrable and stay finite.
 * Throws when max |J| exceeds the weight's domain cap.
 */
inline double lhs_from_primitive(const PiecewiseLinear& J, const MonotoneWeight& w,
                                 IntegrationPath path = IntegrationPath::automatic,
                                 QuadratureControl ctl = {}) {
    if (J.max_abs() > w.domain_cap())
        throw std::domain_error("weight domain exceeded: max |J| > T");

    const bool log_singular =
        w.kind() == WeightKind::shifted_log && w.param() == 0.0;
    bool use_quadrature = false;
    switch (path) {
    case IntegrationPath::automatic:
        use_quadrature = w.kind() == WeightKind::table;
        break;
    case IntegrationPath::closed_form:
        if (w.kind() == WeightKind::table)
            throw std::invalid_argument("closed-form path requires an analytic weight");
        break;
    case IntegrationPath::quadrature:
        if (log_singular)
            throw std::domain_error("quadrature path refuses log singularity at 0");
        use_quadrature = true;
        break;
    }

    compensated_sum acc;
    for (const auto& piece : detail::sign_pieces(J)) {
        if (piece.x1 <= piece.x0) continue;
        if (log_singular && piece.u0 == piece.u1 && piece.u0 == 0.0)
            return -kInf; // J == 0 on positive measure
        acc.add(use_quadrature ? detail::integrate_piece_quadrature(piece, w, ctl)
                               : detail::integrate_piece_closed(piece, w));
    }
    return acc.result();
}

/// int_0^1 phi(|J(f)|) dx.
inline double lhs_integral(const StepFunction& f, const MonotoneWeight& w,
                           IntegrationPath path = IntegrationPath::automatic,
                           QuadratureControl ctl = {}) {
    return lhs_from_primitive(primitive(f), w, path, ctl);
}

} // namespace meanzero
