#pragma once

/**
 * @file piecewise_linear.hpp
 * @brief Continuous piecewise-linear functions on [0,1].
 *
 * Represents the primitive J(f) of a step function and the tent-shaped
 * envelopes. Nodes are strictly increasing, first 0 and last 1; between
 * nodes the function interpolates linearly. Evaluation at a stored node
 * returns the stored value, never an interpolated one.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "meanzero/numeric.hpp"

namespace meanzero {

class PiecewiseLinear {
  public:
    PiecewiseLinear(std::vector<double> nodes, std::vector<double> values)
        : nodes_(std::move(nodes)), values_(std::move(values)) {
        if (nodes_.size() < 2 || values_.size() != nodes_.size())
            throw std::invalid_argument("piecewise linear: need one value per node, at least two nodes");
        if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
            throw std::invalid_argument("piecewise linear: nodes must start at 0 and end at 1");
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
            if (!(nodes_[i] < nodes_[i + 1]))
                throw std::invalid_argument("piecewise linear: nodes must be strictly increasing");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("piecewise linear: values must be finite");
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t segment_count() const { return nodes_.size() - 1; }

    double slope(std::size_t seg) const {
        return (values_[seg + 1] - values_[seg]) / (nodes_[seg + 1] - nodes_[seg]);
    }

    double operator()(double x) const {
        if (x < 0.0 || x > 1.0)
            throw std::domain_error("piecewise linear: argument outside [0,1]");
        const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
        if (it != nodes_.end() && *it == x)
            return values_[static_cast<std::size_t>(it - nodes_.begin())];
        const std::size_t seg = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        const double t = (x - nodes_[seg]) / (nodes_[seg + 1] - nodes_[seg]);
        return values_[seg] + t * (values_[seg + 1] - values_[seg]);
    }

    /// Max of |value| over nodes; for piecewise-linear functions this is
    /// the global max of |.| on [0,1].
    double max_abs() const {
        double best = 0.0;
        for (double v : values_) best = std::fmax(best, std::fabs(v));
        return best;
    }

    /// Exact trapezoid integral over [0,1], compensated left to right.
    double integral() const {
        compensated_sum acc;
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            const double w = nodes_[i + 1] - nodes_[i];
            acc.add_product(0.5 * w, values_[i] + values_[i + 1]);
        }
        return acc.result();
    }

    PiecewiseLinear negated() const {
        std::vector<double> neg(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) neg[i] = -values_[i];
        return PiecewiseLinear(nodes_, neg);
    }

  private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

} // namespace meanzero
