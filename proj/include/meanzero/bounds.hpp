#pragma once

/**
 * @file bounds.hpp
 * @brief The box (m, M) with m < 0 < M and its derived constants.
 *
 * Every quantity downstream is a function of the pair (m, M):
 *
 *   peak      h* = -mM/(M-m)   sharp uniform bound on |J(f)|
 *   crossover c0 = -m/(M-m)    jump location of the up-then-down extremizer
 *   crossover c1 =  M/(M-m)    jump location of the down-then-up extremizer
 *
 * The crossovers and the peak are computed once here and reused
 * everywhere (extremizers, envelopes, vertex enumeration) so that all
 * modules agree on them bitwise. h* is pinned to fl(M * c0), which makes
 * the primitive of the up-then-down extremizer hit the positive envelope
 * apex exactly.
 */

#include <cmath>
#include <stdexcept>

namespace meanzero {

class Bounds {
  public:
    Bounds(double m, double M) : m_(m), M_(M) {
        if (!std::isfinite(m) || !std::isfinite(M))
            throw std::invalid_argument("bounds must be finite");
        if (!(m < 0.0 && 0.0 < M))
            throw std::invalid_argument("requires m < 0 < M");
        const double span = M - m;
        c0_ = -m / span;
        c1_ = 1.0 - c0_; // within 1 ulp of M/(M-m), and c0 + c1 == 1 holds exactly
        peak_ = M * c0_;
        if (!(0.0 < c0_ && c0_ < 1.0 && 0.0 < c1_ && c1_ < 1.0))
            throw std::invalid_argument("bounds aspect ratio too extreme: crossover collapses onto an endpoint");
    }

    double m() const { return m_; }
    double M() const { return M_; }
    double span() const { return M_ - m_; }

    /// h* = -mM/(M-m); 0 < h* < min(-m, M).
    double peak() const { return peak_; }
    /// c0 = -m/(M-m).
    double crossover0() const { return c0_; }
    /// c1 = M/(M-m), stored as 1 - c0 so the pair sums to 1 exactly.
    double crossover1() const { return c1_; }

    bool contains(double v) const { return m_ <= v && v <= M_; }

  private:
    double m_;
    double M_;
    double c0_;
    double c1_;
    double peak_;
};

inline Bounds make_bounds(double m, double M) { return Bounds(m, M); }

} // namespace meanzero
