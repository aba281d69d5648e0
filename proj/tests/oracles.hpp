#pragma once

/**
 * @file oracles.hpp
 * @brief Test-only oracles, independent of the library's integration
 *        and projection paths.
 *
 * The Riemann oracles evaluate J by direct summation over cells and
 * integrate by the midpoint rule, so they share no code with the
 * segment-decomposition path they cross-check. Expected values frozen
 * in the tests were produced by these oracles or by hand from the
 * closed forms.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "meanzero/bounds.hpp"
#include "meanzero/sampling.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"

namespace oracles {

/// J(f)(x) by direct per-cell summation; no PiecewiseLinear involved.
inline double primitive_direct(const meanzero::StepFunction& f, double x) {
    const auto& bp = f.breakpoints();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        const double lo = bp[i], hi = bp[i + 1];
        if (x <= lo) break;
        sum += f.values()[i] * (std::min(x, hi) - lo);
    }
    return sum;
}

/// Midpoint-rule approximation of int_0^1 phi(|J(f)|).
inline double riemann_lhs(const meanzero::StepFunction& f,
                          const meanzero::MonotoneWeight& w, std::size_t n = 20000) {
    double sum = 0.0;
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * h;
        sum += w(std::fabs(primitive_direct(f, x)));
    }
    return sum * h;
}

/// Midpoint-rule approximation of K(phi, t).
inline double riemann_k(const meanzero::MonotoneWeight& w, double t,
                        std::size_t n = 200000) {
    double sum = 0.0;
    const double h = t / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        sum += w((static_cast<double>(i) + 0.5) * h);
    return sum * h / t;
}

/// Midpoint-rule approximation of int_0^1 x f(x) dx.
inline double riemann_first_moment(const meanzero::StepFunction& f,
                                   std::size_t n = 200000) {
    double sum = 0.0;
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * h;
        sum += x * f(x);
    }
    return sum * h;
}

/// Zero-mean projection on an arbitrary breakpoint grid (the library's
/// water-filling is specified for uniform grids only). Bisects a shift
/// against the width-weighted clipped mean, then cancels the residue on
/// the first cell with slack.
inline meanzero::StepFunction project_weighted(std::vector<double> breakpoints,
                                               std::vector<double> values,
                                               const meanzero::Bounds& b) {
    const std::size_t n = values.size();
    std::vector<double> widths(n);
    for (std::size_t i = 0; i < n; ++i) widths[i] = breakpoints[i + 1] - breakpoints[i];

    auto clipped_mean = [&](double s) {
        meanzero::compensated_sum acc;
        for (std::size_t i = 0; i < n; ++i)
            acc.add_product(std::clamp(values[i] - s, b.m(), b.M()), widths[i]);
        return acc.result();
    };

    double lo = -(b.M() - b.m()), hi = b.M() - b.m(), s = 0.0;
    double mean_s = clipped_mean(s);
    for (int it = 0; it < 100 && std::fabs(mean_s) > 1e-15; ++it) {
        (mean_s > 0.0 ? lo : hi) = s;
        s = 0.5 * (lo + hi);
        mean_s = clipped_mean(s);
    }
    for (double& v : values) v = std::clamp(v - s, b.m(), b.M());

    meanzero::StepFunction f(breakpoints, values);
    for (int round = 0; round < 4; ++round) {
        const double mean = f.mean();
        if (mean == 0.0) break;
        bool applied = false;
        for (std::size_t i = 0; i < n && !applied; ++i) {
            const double corrected = values[i] - mean / widths[i];
            if (b.contains(corrected) && corrected != values[i]) {
                values[i] = corrected;
                applied = true;
            }
        }
        if (!applied) break;
        f = meanzero::StepFunction(breakpoints, values);
    }
    return f;
}

/// Deterministic admissible sample, shorthand for tests.
inline meanzero::StepFunction random_admissible(const meanzero::Bounds& b,
                                                std::size_t cells, std::uint64_t seed,
                                                std::uint64_t index = 0) {
    return meanzero::sample_feasible(
        b, meanzero::SamplerConfig{cells, seed, meanzero::SampleScheme::uniform_project},
        index);
}

} // namespace oracles
