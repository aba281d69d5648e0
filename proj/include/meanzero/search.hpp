#pragma once

/**
 * @file search.hpp
 * @brief Extremal search over the discretized feasible polytope.
 *
 * On a uniform n-cell grid the feasible set {v in [m,M]^n : sum v = 0}
 * is a polytope whose vertices carry at most one non-binary coordinate.
 * For convex nondecreasing phi the objective int phi(|J|) is convex, so
 * its maximum over the polytope is attained at a vertex and exhaustive
 * vertex enumeration is an exact oracle (n capped at 24). For other
 * weights a multistart local search provides non-certifying evidence.
 *
 * Sharpness shows up as the vertex maximum converging to K(phi, h*) as
 * the grid refines, with the argmax matching the discretized
 * extremizers; when the crossover lies on the grid the bound is
 * attained outright.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "meanzero/bounds.hpp"
#include "meanzero/sampling.hpp"
#include "meanzero/sharp_bounds.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"

namespace meanzero {

/// Candidate count is n * 2^(n-1) before filtering; 24 keeps it tractable.
inline constexpr std::size_t kVertexCellCap = 24;

struct Vertex {
    std::size_t cells = 0;
    std::uint32_t high_mask = 0; ///< bit i set: cell i carries M
    std::optional<std::size_t> frac_index;
    double frac_value = 0.0; ///< strictly inside (m, M) when present

    std::vector<double> values(const Bounds& b) const {
        std::vector<double> v(cells);
        for (std::size_t i = 0; i < cells; ++i)
            v[i] = (high_mask >> i) & 1U ? b.M() : b.m();
        if (frac_index) v[*frac_index] = frac_value;
        return v;
    }

    StepFunction to_step(const Bounds& b) const {
        return StepFunction::uniform(values(b));
    }
};

namespace detail {

template <typename F>
void for_each_combination(std::size_t slots, std::size_t k, F&& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + slots - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
        if (k == 0) return;
    }
}

} // namespace detail

/**
 * Visits every feasible vertex exactly once. Binary vertices are those
 * whose {m, M} pattern sums to zero exactly; fractional candidates whose
 * forced value lands exactly on m or M are the same functions and are
 * skipped here (canonicalized to their binary form).
 */
template <typename Visitor>
void enumerate_vertices(const Bounds& b, std::size_t n, Visitor&& visit) {
    if (n < 1) throw std::invalid_argument("vertex enumeration requires n >= 1");
    if (n > kVertexCellCap)
        throw std::invalid_argument("vertex enumeration capped at n <= 24");
    const double m = b.m(), M = b.M();

    for (std::size_t k = 0; k <= n; ++k) {
        const double total =
            static_cast<double>(k) * M + static_cast<double>(n - k) * m;
        if (total != 0.0) continue;
        detail::for_each_combination(n, k, [&](const std::vector<std::size_t>& idx) {
            Vertex v;
            v.cells = n;
            for (std::size_t i : idx) v.high_mask |= 1U << i;
            visit(v);
        });
    }

    for (std::size_t frac = 0; frac < n; ++frac) {
        std::vector<std::size_t> others;
        others.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            if (i != frac) others.push_back(i);
        for (std::size_t k = 0; k + 1 <= n; ++k) {
            const double fv = 0.0 - (static_cast<double>(k) * M +
                                     static_cast<double>(n - 1 - k) * m);
            if (!(m < fv && fv < M)) continue;
            detail::for_each_combination(n - 1, k, [&](const std::vector<std::size_t>& idx) {
                Vertex v;
                v.cells = n;
                v.frac_index = frac;
                v.frac_value = fv;
                for (std::size_t i : idx) v.high_mask |= 1U << others[i];
                visit(v);
            });
        }
    }
}

inline std::vector<Vertex> enumerate_vertices(const Bounds& b, std::size_t n) {
    std::vector<Vertex> out;
    enumerate_vertices(b, n, [&](const Vertex& v) { out.push_back(v); });
    return out;
}

struct SearchStrategy {
    enum class Kind { vertex_enum, local_search };
    Kind kind = Kind::vertex_enum;
    std::size_t restarts = 50;  ///< local search only
    std::uint64_t seed = 0;     ///< local search only
    bool assume_convex = false; ///< caller-asserted convexity for tables

    static SearchStrategy vertex_enum() { return {}; }
    static SearchStrategy local_search(std::size_t restarts, std::uint64_t seed) {
        return {Kind::local_search, restarts, seed, false};
    }
};

struct SearchResult {
    StepFunction best;
    double value = 0.0;
    double gap = 0.0;            ///< theorem1_bound - value, >= -1e-9 always
    std::size_t candidates = 0;  ///< vertices visited / restarts run
    bool certified = false;      ///< true only for exact vertex enumeration
};

namespace detail {

struct BestTracker {
    double value = -kInf;
    std::vector<double> cells;

    /// Larger value wins; exact ties go to the lexicographically
    /// smallest cell vector so reports are deterministic.
    bool consider(double v, const std::vector<double>& c) {
        if (v > value ||
            (v == value && std::lexicographical_compare(c.begin(), c.end(),
                                                        cells.begin(), cells.end()))) {
            value = v;
            cells = c;
            return true;
        }
        return false;
    }
};

inline void cancel_mean_residual(std::vector<double>& values, const Bounds& b) {
    const double nd = static_cast<double>(values.size());
    for (int round = 0; round < 4; ++round) {
        const double mean = uniform_mean(values);
        if (mean == 0.0) break;
        const double delta = mean * nd;
        bool applied = false;
        for (std::size_t i = 0; i < values.size() && !applied; ++i) {
            const double corrected = values[i] - delta;
            if (b.contains(corrected) && corrected != values[i]) {
                values[i] = corrected;
                applied = true;
            }
        }
        if (!applied) break;
    }
}

} // namespace detail

/**
 * Maximizes int phi(|J(f)|) over the n-cell discretization.
 *
 * vertex_enum is exact for convex phi (power p >= 1, or caller-asserted)
 * and rejects anything else. local_search runs multistart
 * first-improvement moves: push mass between a cell pair to its box
 * limit, or swap two cells; both preserve the zero mean, with the exact
 * residue re-cancelled after every accepted move.
 */
inline SearchResult search_max(const Bounds& b, const MonotoneWeight& w, std::size_t n,
                               const SearchStrategy& strategy = {}) {
    const double bound = theorem1_bound(b, w);
    detail::BestTracker best;
    std::size_t candidates = 0;

    if (strategy.kind == SearchStrategy::Kind::vertex_enum) {
        if (!w.convex_hint() && !strategy.assume_convex)
            throw std::invalid_argument(
                "vertex enumeration requires a convex weight (power p >= 1, or assume_convex)");
        enumerate_vertices(b, n, [&](const Vertex& v) {
            ++candidates;
            const std::vector<double> cells = v.values(b);
            best.consider(lhs_integral(StepFunction::uniform(cells), w), cells);
        });
        if (candidates == 0)
            throw std::runtime_error("no feasible vertex at this grid size");
    } else {
        if (strategy.restarts < 1)
            throw std::invalid_argument("local search requires restarts >= 1");
        SamplerConfig start_cfg{n, strategy.seed, SampleScheme::uniform_project};
        for (std::size_t r = 0; r < strategy.restarts; ++r) {
            ++candidates;
            std::vector<double> v = sample_feasible(b, start_cfg, r).values();
            double value = lhs_integral(StepFunction::uniform(v), w);

            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t i = 0; i < n && !improved; ++i) {
                    for (std::size_t j = 0; j < n && !improved; ++j) {
                        if (i == j) continue;
                        const double t = std::fmin(b.M() - v[i], v[j] - b.m());
                        if (t <= 0.0) continue;
                        std::vector<double> cand = v;
                        cand[i] = std::fmin(cand[i] + t, b.M());
                        cand[j] = std::fmax(cand[j] - t, b.m());
                        detail::cancel_mean_residual(cand, b);
                        const double cv = lhs_integral(StepFunction::uniform(cand), w);
                        if (cv > value + 1e-12) {
                            v = std::move(cand);
                            value = cv;
                            improved = true;
                        }
                    }
                }
                for (std::size_t i = 0; i < n && !improved; ++i) {
                    for (std::size_t j = i + 1; j < n && !improved; ++j) {
                        if (v[i] == v[j]) continue;
                        std::vector<double> cand = v;
                        std::swap(cand[i], cand[j]);
                        const double cv = lhs_integral(StepFunction::uniform(cand), w);
                        if (cv > value + 1e-12) {
                            v = std::move(cand);
                            value = cv;
                            improved = true;
                        }
                    }
                }
            }
            best.consider(value, v);
        }
    }

    SearchResult res{StepFunction::uniform(best.cells), best.value, bound - best.value,
                     candidates,
                     strategy.kind == SearchStrategy::Kind::vertex_enum};
    return res;
}

struct ConvergenceRow {
    std::size_t n = 0;
    double value = 0.0;
    double gap = 0.0;
};

/// Vertex-enumeration maxima over an ascending list of grid sizes.
inline std::vector<ConvergenceRow> convergence_study(const Bounds& b,
                                                     const MonotoneWeight& w,
                                                     const std::vector<std::size_t>& n_list,
                                                     const SearchStrategy& strategy = {}) {
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
        if (!(n_list[i] < n_list[i + 1]))
            throw std::invalid_argument("convergence study requires ascending grid sizes");
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_list.size());
    for (std::size_t n : n_list) {
        const SearchResult r = search_max(b, w, n, strategy);
        rows.push_back({n, r.value, r.gap});
    }
    return rows;
}

} // namespace meanzero
