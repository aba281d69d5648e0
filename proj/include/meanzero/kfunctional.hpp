#pragma once

/**
 * @file kfunctional.hpp
 * @brief The running average K(phi, t) = (1/t) int_0^t phi and its
 *        monotonicity diagnostics.
 *
 * For nondecreasing phi, K(phi, .) is nondecreasing in t, strictly so
 * when phi is not constant; the sharp bound on int phi(|J(f)|) is
 * K(phi, h*). Strictness is reported, not asserted: at fixed floating
 * tolerance a strict inequality on a plateau is not falsifiable, so
 * plateaus are flagged and only decreases beyond tolerance count as
 * violations.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "meanzero/quadrature.hpp"
#include "meanzero/weight.hpp"

namespace meanzero {

struct KQuery {
    MonotoneWeight weight;
    double t;
};

/// K(phi, t) via the weight's exact prefix integral.
inline double k_functional(const MonotoneWeight& w, double t) {
    if (!(t > 0.0)) throw std::domain_error("k_functional requires t > 0");
    if (t > w.domain_cap())
        throw std::domain_error("k_functional: t beyond weight domain");
    return w.prefix_integral(t) / t;
}

inline double k_functional(const KQuery& q) { return k_functional(q.weight, q.t); }

/// Generic-quadrature fallback; refuses the extended-real shifted_log(0)
/// whose singularity is handled only by the closed form.
inline double k_functional_quadrature(const MonotoneWeight& w, double t,
                                      QuadratureControl ctl = {}) {
    if (!(t > 0.0)) throw std::domain_error("k_functional requires t > 0");
    if (t > w.domain_cap())
        throw std::domain_error("k_functional: t beyond weight domain");
    if (w.kind() == WeightKind::shifted_log && w.param() == 0.0)
        throw std::domain_error("k_functional: quadrature refuses log singularity at 0");
    return adaptive_integrate([&](double x) { return w(x); }, 0.0, t, ctl) / t;
}

struct LemmaReport {
    std::size_t grid = 0;
    std::size_t violations = 0;   ///< pairs i < j with K(t_i) > K(t_j) + tol
    double max_violation = 0.0;   ///< largest decrease seen (0 if none)
    bool plateau = false;         ///< some adjacent K values coincide
    double tolerance = 1e-10;
};

/**
 * Evaluates K(phi, iT/grid) for i = 1..grid and scans for decreases.
 * A decrease beyond tolerance is a violation; exact plateaus (constant
 * phi) are flagged but do not fail.
 */
inline LemmaReport lemma_monotonicity_check(const MonotoneWeight& w, double T,
                                            std::size_t grid) {
    if (grid < 2) throw std::invalid_argument("lemma check requires grid >= 2");
    if (!(T > 0.0) || T > w.domain_cap())
        throw std::domain_error("lemma check: T must lie in (0, weight domain]");

    LemmaReport rep;
    rep.grid = grid;
    double running_max = -kInf;
    double prev = 0.0;
    for (std::size_t i = 1; i <= grid; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(grid);
        const double k = k_functional(w, t);
        if (i > 1) {
            const double drop = running_max - k;
            if (drop > rep.max_violation) rep.max_violation = drop;
            if (drop > rep.tolerance) ++rep.violations;
            const double scale = std::fmax(1.0, std::fabs(k));
            if (std::fabs(k - prev) <= 1e-14 * scale) rep.plateau = true;
        }
        running_max = std::fmax(running_max, k);
        prev = k;
    }
    return rep;
}

} // namespace meanzero
