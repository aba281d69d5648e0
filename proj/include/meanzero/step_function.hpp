#pragma once

/**
 * @file step_function.hpp
 * @brief Exact piecewise-constant functions on [0,1].
 *
 * A step function stores sorted breakpoints 0 = x0 < x1 < ... < xk = 1
 * and one value per cell [x_{i-1}, x_i). Breakpoints are arbitrary
 * doubles, not grid indices, so the extremizers -- whose jump sits at
 * the generically irrational crossover -m/(M-m) -- are represented
 * without discretization error.
 *
 * The mean and the primitive are computed with error-free transforms:
 * the returned doubles are the real-arithmetic values of the stored
 * fields, faithfully rounded. Refining the breakpoint set therefore
 * leaves the mean bit-identical.
 *
 * Zero-width cells are rejected at construction. Adjacent equal values
 * are kept as-is; merging is the explicit normalized() operation.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "meanzero/bounds.hpp"
#include "meanzero/numeric.hpp"
#include "meanzero/piecewise_linear.hpp"

namespace meanzero {

/// Admissibility gate on the zero-mean constraint.
inline constexpr double kMeanTolerance = 1e-12;

class StepFunction {
  public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> values)
        : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
        if (breakpoints_.size() < 2 || values_.size() + 1 != breakpoints_.size())
            throw std::invalid_argument("step function: need one value per cell");
        if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
            throw std::invalid_argument("step function: breakpoints must start at 0 and end at 1");
        for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
            if (!(breakpoints_[i] < breakpoints_[i + 1]))
                throw std::invalid_argument("step function: breakpoints must be strictly increasing");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("step function: values must be finite");
    }

    /// Uniform grid with cells of width 1/n; breakpoints are fl(i/n).
    static StepFunction uniform(std::vector<double> values) {
        const std::size_t n = values.size();
        if (n == 0) throw std::invalid_argument("step function: no cells");
        std::vector<double> bp(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            bp[i] = static_cast<double>(i) / static_cast<double>(n);
        bp[n] = 1.0;
        return StepFunction(std::move(bp), std::move(values));
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t cell_count() const { return values_.size(); }
    double cell_width(std::size_t i) const {
        return breakpoints_[i + 1] - breakpoints_[i];
    }

    /// Value on the cell containing x; cells are right-open, the last
    /// cell additionally owns x = 1.
    double operator()(double x) const {
        if (x < 0.0 || x > 1.0)
            throw std::domain_error("step function: argument outside [0,1]");
        if (x == 1.0) return values_.back();
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
    }

    /// Integral over [0,1]: the correctly rounded exact value of
    /// sum_i value_i * (x_{i+1} - x_i) over the stored fields, summed
    /// left to right.
    double mean() const {
        exact_sum acc;
        for (std::size_t i = 0; i < values_.size(); ++i)
            acc.add_scaled_diff(values_[i], breakpoints_[i + 1], breakpoints_[i]);
        return acc.result();
    }

    bool is_admissible(const Bounds& b, double mean_tol = kMeanTolerance) const {
        for (double v : values_)
            if (!b.contains(v)) return false;
        return std::fabs(mean()) <= mean_tol;
    }

    /// Same function on a finer breakpoint set (extra points merged in).
    StepFunction refined(const std::vector<double>& extra) const {
        std::vector<double> bp = breakpoints_;
        for (double x : extra) {
            if (x <= 0.0 || x >= 1.0) continue;
            const auto it = std::lower_bound(bp.begin(), bp.end(), x);
            if (it == bp.end() || *it != x) bp.insert(it, x);
        }
        std::vector<double> vals(bp.size() - 1);
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) vals[i] = (*this)(bp[i]);
        return StepFunction(std::move(bp), std::move(vals));
    }

    /// Explicit normalization: merges adjacent cells with equal values.
    StepFunction normalized() const {
        std::vector<double> bp{breakpoints_.front()};
        std::vector<double> vals;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!vals.empty() && vals.back() == values_[i]) {
                bp.back() = breakpoints_[i + 1];
            } else {
                vals.push_back(values_[i]);
                bp.push_back(breakpoints_[i + 1]);
            }
        }
        return StepFunction(std::move(bp), std::move(vals));
    }

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/**
 * The running integral J(f)(x) = int_0^x f.
 *
 * Nodes are f's breakpoints; node values are the left-to-right exact
 * cumulative sums, each correctly rounded, with J(0) = 0. Segment
 * slopes equal the cell values up to one rounding each.
 */
inline PiecewiseLinear primitive(const StepFunction& f) {
    const auto& bp = f.breakpoints();
    std::vector<double> vals(bp.size(), 0.0);
    exact_sum acc;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        acc.add_scaled_diff(f.values()[i], bp[i + 1], bp[i]);
        vals[i + 1] = acc.result();
    }
    return PiecewiseLinear(bp, std::move(vals));
}

/// int_0^1 x f(x) dx by the exact per-cell closed form
/// v_i (x_i^2 - x_{i-1}^2)/2.
inline double first_moment(const StepFunction& f) {
    const auto& bp = f.breakpoints();
    compensated_sum acc;
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        const double mid = 0.5 * (bp[i + 1] + bp[i]);
        acc.add_scaled_diff(f.values()[i] * mid, bp[i + 1], bp[i]);
    }
    return acc.result();
}

/// Residual of the integration-by-parts identity
/// int x f dx = -int J(f) dx; ~0 for zero-mean f.
inline double moment_identity_residual(const StepFunction& f) {
    return first_moment(f) + primitive(f).integral();
}

} // namespace meanzero
