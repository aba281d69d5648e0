#pragma once

/**
 * @file extremal.hpp
 * @brief The two extremizers and the numeric equality certificates.
 *
 * Equality in the main bound holds exactly for the two-step functions
 *
 *   f0 = M on [0, c0), m on [c0, 1]   (primitive: tent up to +h*)
 *   f1 = m on [0, c1), M on [c1, 1]   (primitive: tent down to -h*)
 *
 * whose |J| coincide as functions. Both are built with the crossovers
 * cached in Bounds, so their breakpoints agree bitwise with the
 * envelopes and with the vertex patterns the search module produces.
 */

#include <cmath>
#include <stdexcept>

#include "meanzero/bounds.hpp"
#include "meanzero/piecewise_linear.hpp"
#include "meanzero/sharp_bounds.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"

namespace meanzero {

enum class ExtremalChoice { f0, f1 };

inline StepFunction extremal(const Bounds& b, ExtremalChoice which) {
    if (which == ExtremalChoice::f0)
        return StepFunction({0.0, b.crossover0(), 1.0}, {b.M(), b.m()});
    return StepFunction({0.0, b.crossover1(), 1.0}, {b.m(), b.M()});
}

/// The primitive in closed form: node-exact equal to envelope_pos for
/// f0 and to the negation of envelope_neg for f1.
inline PiecewiseLinear extremal_primitive(const Bounds& b, ExtremalChoice which) {
    if (which == ExtremalChoice::f0)
        return PiecewiseLinear({0.0, b.crossover0(), 1.0}, {0.0, b.peak(), 0.0});
    return PiecewiseLinear({0.0, b.crossover1(), 1.0}, {0.0, -b.peak(), 0.0});
}

struct EqualityReport {
    double bound = 0.0;
    double lhs_f0 = 0.0;
    double lhs_f1 = 0.0;
    double gap_f0 = 0.0; ///< |bound - lhs_f0|
    double gap_f1 = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    /// Equality pins f down only for non-constant phi; constant weights
    /// skip the uniqueness claim.
    bool uniqueness_applicable = true;
};

/**
 * Evaluates int phi(|J|) on both extremizers against K(phi, h*).
 * Closed-form weights certify at 1e-10, table weights (generic
 * quadrature) at 1e-8.
 */
inline EqualityReport certify_equality(const Bounds& b, const MonotoneWeight& w) {
    EqualityReport rep;
    rep.bound = theorem1_bound(b, w);
    rep.lhs_f0 = lhs_integral(extremal(b, ExtremalChoice::f0), w);
    rep.lhs_f1 = lhs_integral(extremal(b, ExtremalChoice::f1), w);
    rep.gap_f0 = std::fabs(rep.bound - rep.lhs_f0);
    rep.gap_f1 = std::fabs(rep.bound - rep.lhs_f1);
    rep.tolerance = w.kind() == WeightKind::table ? 1e-8 : 1e-10;
    rep.pass = rep.gap_f0 <= rep.tolerance && rep.gap_f1 <= rep.tolerance;
    rep.uniqueness_applicable = !w.constant_on(b.peak());
    return rep;
}

} // namespace meanzero
