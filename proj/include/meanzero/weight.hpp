#pragma once

/**
 * @file weight.hpp
 * @brief Nondecreasing weights phi on [0, T] with exact prefix integrals.
 *
 * Three families:
 *
 *   power(p)        phi(x) = x^p,        p > 0
 *   shifted_log(e)  phi(x) = log(e + x), e >= 0
 *   table           linear interpolation through validated knots
 *
 * power and shifted_log default to an unbounded domain cap; a finite cap
 * can be imposed to exercise domain errors. shifted_log(0) is
 * extended-real at 0 (evaluates to -inf); only closed-form integration
 * paths may touch that point.
 *
 * prefix_integral(t) = int_0^t phi is closed-form for the two analytic
 * families and an exact trapezoid sum (the table is piecewise linear)
 * for tables. These prefix integrals are the single source for the
 * K-functional and for the segment decomposition of int phi(|J|).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "meanzero/numeric.hpp"

namespace meanzero {

/// Monotonicity slack allowed when validating table knots.
inline constexpr double kMonotoneTolerance = 1e-14;

enum class WeightKind { power, shifted_log, table };

class MonotoneWeight {
  public:
    static MonotoneWeight power(double p, double domain_cap = kInf) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("power weight requires finite p > 0");
        MonotoneWeight w(WeightKind::power, p, domain_cap);
        w.exponent_plus_one_ = p + 1.0;
        w.int_exponent_ = static_cast<int>(w.exponent_plus_one_);
        w.integer_exponent_ = w.exponent_plus_one_ == static_cast<double>(w.int_exponent_) &&
                              w.int_exponent_ <= 8;
        return w;
    }

    static MonotoneWeight shifted_log(double eps, double domain_cap = kInf) {
        if (!(eps >= 0.0) || !std::isfinite(eps))
            throw std::invalid_argument("shifted_log weight requires finite eps >= 0");
        return MonotoneWeight(WeightKind::shifted_log, eps, domain_cap);
    }

    static MonotoneWeight table(std::vector<double> xs, std::vector<double> phis) {
        if (xs.size() < 2 || xs.size() != phis.size())
            throw std::invalid_argument("table weight requires at least two knots and one value per knot");
        if (xs.front() != 0.0)
            throw std::invalid_argument("table weight knots must start at x = 0");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!(xs[i] < xs[i + 1]))
                throw std::invalid_argument("table weight knots must be strictly increasing");
        for (std::size_t i = 0; i < phis.size(); ++i) {
            if (!std::isfinite(phis[i]) || !std::isfinite(xs[i]))
                throw std::invalid_argument("table weight entries must be finite");
            if (i > 0 && phis[i] < phis[i - 1] - kMonotoneTolerance)
                throw std::invalid_argument("table weight values must be nondecreasing");
        }
        MonotoneWeight w(WeightKind::table, 0.0, xs.back());
        w.prefix_.assign(xs.size(), 0.0);
        compensated_sum acc;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            acc.add_product(0.5 * (xs[i + 1] - xs[i]), phis[i] + phis[i + 1]);
            w.prefix_[i + 1] = acc.result();
        }
        w.xs_ = std::move(xs);
        w.phis_ = std::move(phis);
        return w;
    }

    WeightKind kind() const { return kind_; }
    double domain_cap() const { return cap_; }
    double param() const { return param_; }

    /// phi(x). Throws outside [0, T]; -inf only for shifted_log(0) at 0.
    double operator()(double x) const {
        if (!(x >= 0.0) || x > cap_)
            throw std::domain_error("weight evaluated outside [0, T]");
        switch (kind_) {
        case WeightKind::power:
            return std::pow(x, param_);
        case WeightKind::shifted_log:
            return (param_ == 0.0 && x == 0.0) ? -kInf : std::log(param_ + x);
        case WeightKind::table:
        default: {
            const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
            if (it != xs_.end() && *it == x)
                return phis_[static_cast<std::size_t>(it - xs_.begin())];
            const std::size_t seg = static_cast<std::size_t>(it - xs_.begin()) - 1;
            const double t = (x - xs_[seg]) / (xs_[seg + 1] - xs_[seg]);
            return phis_[seg] + t * (phis_[seg + 1] - phis_[seg]);
        }
        }
    }

    /**
     * int_0^t phi, exact up to rounding.
     *
     *   power:       t^(p+1)/(p+1)
     *   shifted_log: (e+t) log(e+t) - t - e log e   (e log e -> 0 as e -> 0)
     *   table:       trapezoid prefix clipped to [0, t]
     *
     * Finite for every t in [0, T], including shifted_log(0) whose
     * singularity at 0 is integrable.
     */
    double prefix_integral(double t) const {
        if (!(t >= 0.0) || t > cap_)
            throw std::domain_error("weight integral outside [0, T]");
        switch (kind_) {
        case WeightKind::power:
            return pow_p1(t) / exponent_plus_one_;
        case WeightKind::shifted_log: {
            if (t == 0.0) return 0.0;
            const double e = param_;
            const double head = (e + t) * std::log(e + t) - t;
            return e == 0.0 ? head : head - e * std::log(e);
        }
        case WeightKind::table:
        default: {
            const auto it = std::lower_bound(xs_.begin(), xs_.end(), t);
            if (it != xs_.end() && *it == t)
                return prefix_[static_cast<std::size_t>(it - xs_.begin())];
            const std::size_t seg = static_cast<std::size_t>(it - xs_.begin()) - 1;
            const double phi_t = (*this)(t);
            return prefix_[seg] + 0.5 * (t - xs_[seg]) * (phis_[seg] + phi_t);
        }
        }
    }

    /// int over [lo, hi] of phi, 0 <= lo <= hi <= T.
    double integral(double lo, double hi) const {
        return prefix_integral(hi) - prefix_integral(lo);
    }

    /// True when phi is provably convex: power with p >= 1. Licenses
    /// exact vertex-enumeration search; other weights need a caller
    /// assertion.
    bool convex_hint() const {
        return kind_ == WeightKind::power && param_ >= 1.0;
    }

    /// True when phi is constant on (0, t]; the equality
    /// characterization of the main bound does not apply then.
    bool constant_on(double t) const {
        if (kind_ != WeightKind::table) return false;
        double lo = phis_.front(), hi = phis_.front();
        for (std::size_t i = 0; i < xs_.size() && xs_[i] <= t; ++i) {
            lo = std::fmin(lo, phis_[i]);
            hi = std::fmax(hi, phis_[i]);
        }
        return hi - lo <= kMonotoneTolerance;
    }

    const std::vector<double>& table_knots() const { return xs_; }
    const std::vector<double>& table_values() const { return phis_; }

    std::string describe() const {
        switch (kind_) {
        case WeightKind::power: return "pow:" + format_param(param_);
        case WeightKind::shifted_log: return "log:" + format_param(param_);
        case WeightKind::table:
        default: return "table:" + std::to_string(xs_.size()) + "-knots";
        }
    }

  private:
    MonotoneWeight(WeightKind kind, double param, double cap)
        : kind_(kind), param_(param), cap_(cap) {
        if (!(cap > 0.0)) throw std::invalid_argument("weight domain cap must be positive");
    }

    double pow_p1(double u) const {
        if (!integer_exponent_) return std::pow(u, exponent_plus_one_);
        double r = 1.0;
        for (int i = 0; i < int_exponent_; ++i) r *= u;
        return r;
    }

    static std::string format_param(double p) {
        std::string s = std::to_string(p);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    WeightKind kind_;
    double param_;
    double cap_;
    double exponent_plus_one_ = 0.0;
    int int_exponent_ = 0;
    bool integer_exponent_ = false;
    std::vector<double> xs_;
    std::vector<double> phis_;
    std::vector<double> prefix_;
};

} // namespace meanzero
