#pragma once

/**
 * @file numeric.hpp
 * @brief Error-free-transform building blocks for compensated summation.
 *
 * Means and cumulative integrals in this library must be reproducible
 * bit-for-bit and accurate to the last ulp: admissibility gates sit at
 * 1e-12..1e-16, well below what naive left-to-right accumulation
 * guarantees. The kernels here are the classic TwoSum / TwoProd
 * transforms plus a Neumaier accumulator that carries the exact
 * residues forward.
 *
 * All code that sums cell contributions goes through this header so the
 * evaluation order (left to right) and the compensation scheme are fixed
 * in one place. Requires -ffp-contract=off; the build sets it globally.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace meanzero {

struct split_sum {
    double value;
    double error;
};

/// Knuth TwoSum: value + error == a + b exactly, value == fl(a + b).
inline split_sum two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

/// TwoProd via FMA: value + error == a * b exactly, value == fl(a * b).
inline split_sum two_prod(double a, double b) {
    const double p = a * b;
    const double err = std::fma(a, b, -p);
    return {p, err};
}

/**
 * Neumaier (Kahan-Babuska) accumulator.
 *
 * Adding n terms of magnitude ~1 leaves the result within O(n^2 eps^2)
 * of the exact real-arithmetic sum, i.e. exact for every practical
 * purpose at double precision. Terms are fed strictly left to right by
 * callers; the accumulator itself is order-sensitive by design.
 */
class compensated_sum {
  public:
    void add(double x) {
        const split_sum s = two_sum(sum_, x);
        comp_ += s.error;
        sum_ = s.value;
    }

    /// Adds a*b with the product's rounding error recovered exactly.
    void add_product(double a, double b) {
        const split_sum p = two_prod(a, b);
        add(p.value);
        comp_ += p.error;
    }

    /// Adds v*(hi - lo) with both the difference and the products exact.
    void add_scaled_diff(double v, double hi, double lo) {
        const split_sum d = two_sum(hi, -lo);
        add_product(v, d.value);
        add_product(v, d.error);
    }

    double result() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/**
 * Exact accumulator (Shewchuk expansions with fsum-style rounding).
 *
 * Keeps the running sum as a list of non-overlapping partials, so the
 * represented value is the exact real sum of everything added; result()
 * returns its correctly rounded double. Means and primitives go through
 * this: the mean of a step function is then a function of the exact
 * real value of the stored fields alone, which is what makes breakpoint
 * refinement a bit-exact no-op.
 */
class exact_sum {
  public:
    void add(double x) {
        std::size_t used = 0;
        for (std::size_t i = 0; i < partials_.size(); ++i) {
            double p = partials_[i];
            if (std::fabs(x) < std::fabs(p)) std::swap(x, p);
            const split_sum s = two_sum(x, p);
            if (s.error != 0.0) partials_[used++] = s.error;
            x = s.value;
        }
        partials_.resize(used);
        partials_.push_back(x);
    }

    void add_product(double a, double b) {
        const split_sum p = two_prod(a, b);
        if (p.error != 0.0) add(p.error);
        add(p.value);
    }

    /// Adds v*(hi - lo) exactly.
    void add_scaled_diff(double v, double hi, double lo) {
        const split_sum d = two_sum(hi, -lo);
        if (d.error != 0.0) add_product(v, d.error);
        add_product(v, d.value);
    }

    /// Correctly rounded value of the exact sum (round half to even).
    double result() const {
        if (partials_.empty()) return 0.0;
        std::size_t j = partials_.size() - 1;
        double hi = partials_[j];
        double lo = 0.0;
        while (j > 0) {
            const double x = hi;
            const double y = partials_[--j];
            hi = x + y;
            const double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0) break;
        }
        // Halfway case: the discarded tail may flip the final bit.
        if (j > 0 && ((lo < 0.0 && partials_[j - 1] < 0.0) ||
                      (lo > 0.0 && partials_[j - 1] > 0.0))) {
            const double y2 = lo * 2.0;
            const double candidate = hi + y2;
            if (y2 == candidate - hi) hi = candidate;
        }
        return hi;
    }

  private:
    std::vector<double> partials_;
};

inline bool nearly_equal(double a, double b, double rel_tol,
                         double abs_tol = 0.0) {
    const double diff = std::fabs(a - b);
    if (diff <= abs_tol) return true;
    const double scale = std::fmax(std::fabs(a), std::fabs(b));
    return diff <= rel_tol * scale;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace meanzero
