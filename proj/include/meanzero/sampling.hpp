#pragma once

/**
 * @file sampling.hpp
 * @brief Seeded generation of admissible step functions and the
 *        randomized verification campaign.
 *
 * Samples live on a uniform grid. Feasibility (values in [m, M], mean
 * zero) is restored after random draws by water-filling: the clipped
 * mean s -> mean(clip(v - s)) is continuous and nonincreasing with a
 * sign change on [-(M-m), M-m], so bisection always lands on a shift
 * with |mean| <= 1e-15, after which one slack cell absorbs the exact
 * residue.
 *
 * RNG: splitmix64 (Steele, Lea, Flood 2014). Each sample's stream is
 * derived from (seed, sample index), so campaigns evaluate samples in
 * parallel yet aggregate identically to a serial run: the reductions
 * are min/count with ties broken by lowest sample index.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "meanzero/bounds.hpp"
#include "meanzero/extremal.hpp"
#include "meanzero/sharp_bounds.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"

namespace meanzero {

inline constexpr char kRngName[] = "splitmix64";

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

    /// Stream for sample `index` under `seed`; distinct indices give
    /// decorrelated streams regardless of evaluation order.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
        return SplitMix64(mixer.next());
    }

  private:
    std::uint64_t state_;
};

enum class SampleScheme { uniform_project, vertex_jitter };

struct SamplerConfig {
    std::size_t cells = 64;
    std::uint64_t seed = 0;
    SampleScheme scheme = SampleScheme::uniform_project;
};

namespace detail {

/// Mean of clip(v - s) on the uniform grid.
inline double clipped_mean(const std::vector<double>& v, double s, const Bounds& b) {
    compensated_sum acc;
    for (double x : v) acc.add(std::clamp(x - s, b.m(), b.M()));
    return acc.result() / static_cast<double>(v.size());
}

inline double uniform_mean(const std::vector<double>& v) {
    exact_sum acc;
    for (double x : v) acc.add(x);
    return acc.result() / static_cast<double>(v.size());
}

} // namespace detail

/**
 * Projects `values` (uniform grid) onto the feasible set in place:
 * clip to [m, M] after a bisected shift, then cancel the residual mean
 * exactly on the lowest-index cell with enough slack.
 */
inline void project_zero_mean(std::vector<double>& values, const Bounds& b) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("projection needs at least one cell");

    double lo = -(b.M() - b.m()); // mean here is M > 0
    double hi = b.M() - b.m();    // mean here is m < 0
    double s = 0.0;
    double mean_s = detail::clipped_mean(values, s, b);
    for (int it = 0; it < 100 && std::fabs(mean_s) > 1e-15; ++it) {
        if (mean_s > 0.0)
            lo = s;
        else
            hi = s;
        s = 0.5 * (lo + hi);
        mean_s = detail::clipped_mean(values, s, b);
    }
    for (double& x : values) x = std::clamp(x - s, b.m(), b.M());

    // Exact residue cancellation on the first cell that can absorb it.
    const double nd = static_cast<double>(n);
    for (int round = 0; round < 4; ++round) {
        const double mean = detail::uniform_mean(values);
        if (mean == 0.0) break;
        const double delta = mean * nd;
        bool applied = false;
        for (std::size_t i = 0; i < n && !applied; ++i) {
            const double corrected = values[i] - delta;
            if (b.contains(corrected) && corrected != values[i]) {
                values[i] = corrected;
                applied = true;
            }
        }
        if (!applied) break;
    }
}

namespace detail {

/// Random polytope vertex on n cells: binary pattern at {m, M} with at
/// most one fractional cell making the sum exactly zero.
inline std::vector<double> random_vertex(const Bounds& b, std::size_t n, SplitMix64& rng) {
    const double m = b.m(), M = b.M();
    const std::size_t frac = static_cast<std::size_t>(rng.next_below(n));
    std::vector<std::size_t> feasible_k;
    for (std::size_t k = 0; k + 1 <= n; ++k) {
        const double rest = static_cast<double>(k) * M + static_cast<double>(n - 1 - k) * m;
        const double fv = -rest;
        if (m <= fv && fv <= M) feasible_k.push_back(k);
    }
    const std::size_t k = feasible_k[rng.next_below(feasible_k.size())];
    const double frac_value =
        0.0 - (static_cast<double>(k) * M + static_cast<double>(n - 1 - k) * m);

    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (i != frac) others.push_back(i);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(others.size() - i));
        std::swap(others[i], others[j]);
    }

    std::vector<double> v(n, m);
    v[frac] = frac_value;
    for (std::size_t i = 0; i < k; ++i) v[others[i]] = M;
    return v;
}

} // namespace detail

/// Deterministic sample `index` of the stream defined by (b, cfg).
inline StepFunction sample_feasible(const Bounds& b, const SamplerConfig& cfg,
                                    std::uint64_t index = 0) {
    if (cfg.cells < 2) throw std::invalid_argument("sampler requires cells >= 2");
    SplitMix64 rng = SplitMix64::stream(cfg.seed, index);
    std::vector<double> v(cfg.cells);

    if (cfg.scheme == SampleScheme::uniform_project) {
        for (double& x : v) x = b.m() + (b.M() - b.m()) * rng.next_double();
    } else {
        v = detail::random_vertex(b, cfg.cells, rng);
        const double amp = 0.1 * (b.M() - b.m());
        for (double& x : v)
            x = std::clamp(x + amp * (2.0 * rng.next_double() - 1.0), b.m(), b.M());
    }
    project_zero_mean(v, b);
    return StepFunction::uniform(std::move(v));
}

struct CheckRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = true;
};

struct CampaignReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double min_slack = kInf; ///< smallest main-bound slack seen
    std::size_t argmin_index = 0;
    std::optional<StepFunction> argmin_sample;
    std::vector<CheckRecord> checks;
    std::string rng = kRngName;
};

/// Per-check failure thresholds: a check fails when slack < -tolerance.
struct CampaignTolerances {
    double theorem = 1e-9;
    double proposition = 1e-12;
    double envelope = 1e-12;
    double moment = 1e-12;
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MEANZERO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

namespace detail {

struct WorstCase {
    double slack = kInf;
    double lhs = 0.0;
    std::size_t index = 0;

    void consider(double s, double l, std::size_t idx) {
        if (s < slack || (s == slack && idx < index)) {
            slack = s;
            lhs = l;
            index = idx;
        }
    }
    void merge(const WorstCase& o) { consider(o.slack, o.lhs, o.index); }
};

struct CampaignPartial {
    std::size_t violations = 0;
    std::vector<WorstCase> theorem; // one per weight
    WorstCase proposition;
    WorstCase env_pos;
    WorstCase env_neg;
    WorstCase moment;

    explicit CampaignPartial(std::size_t n_weights) : theorem(n_weights) {}

    void merge(const CampaignPartial& o) {
        violations += o.violations;
        for (std::size_t i = 0; i < theorem.size(); ++i) theorem[i].merge(o.theorem[i]);
        proposition.merge(o.proposition);
        env_pos.merge(o.env_pos);
        env_neg.merge(o.env_neg);
        moment.merge(o.moment);
    }
};

} // namespace detail

/**
 * Randomized verification campaign: draws n_samples admissible
 * functions (plus optional explicit extras appended after them) and
 * checks, per sample, the main bound for every weight, the uniform
 * bound, both envelope dominances, and the moment identity.
 *
 * Parallel and serial runs produce identical reports; `threads = 0`
 * consults MEANZERO_THREADS, then hardware concurrency.
 */
inline CampaignReport campaign(const Bounds& b, const std::vector<MonotoneWeight>& weights,
                               std::size_t n_samples, const SamplerConfig& cfg,
                               const std::vector<StepFunction>& extras = {},
                               unsigned threads = 0,
                               const CampaignTolerances& tol = {}) {
    if (n_samples < 1) throw std::invalid_argument("campaign requires n_samples >= 1");
    if (weights.empty()) throw std::invalid_argument("campaign requires at least one weight");

    std::vector<double> bounds_per_weight(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        bounds_per_weight[i] = theorem1_bound(b, weights[i]);
    const double peak = proposition1_bound(b);
    const PiecewiseLinear env_p = envelope_pos(b);
    const PiecewiseLinear env_n = envelope_neg(b);
    const std::size_t total = n_samples + extras.size();

    auto sample_at = [&](std::size_t idx) -> StepFunction {
        return idx < n_samples ? sample_feasible(b, cfg, idx) : extras[idx - n_samples];
    };

    auto run_range = [&](std::size_t begin, std::size_t end, detail::CampaignPartial& out) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const StepFunction f = sample_at(idx);
            const PiecewiseLinear J = primitive(f);

            for (std::size_t wi = 0; wi < weights.size(); ++wi) {
                const double lhs = lhs_from_primitive(J, weights[wi]);
                const double slack = bounds_per_weight[wi] - lhs;
                out.theorem[wi].consider(slack, lhs, idx);
                if (slack < -tol.theorem) ++out.violations;
            }

            const double peak_f = J.max_abs();
            out.proposition.consider(peak - peak_f, peak_f, idx);
            if (peak - peak_f < -tol.proposition) ++out.violations;

            double worst_pos = kInf, worst_neg = kInf;
            auto scan = [&](double x, double j) {
                worst_pos = std::fmin(worst_pos, env_p(x) - j);
                worst_neg = std::fmin(worst_neg, env_n(x) + j);
            };
            for (std::size_t i = 0; i < J.nodes().size(); ++i)
                scan(J.nodes()[i], J.values()[i]);
            scan(b.crossover0(), J(b.crossover0()));
            scan(b.crossover1(), J(b.crossover1()));
            out.env_pos.consider(worst_pos, -worst_pos, idx);
            out.env_neg.consider(worst_neg, -worst_neg, idx);
            if (worst_pos < -tol.envelope) ++out.violations;
            if (worst_neg < -tol.envelope) ++out.violations;

            const double residual = std::fabs(moment_identity_residual(f));
            out.moment.consider(tol.moment - residual, residual, idx);
            if (residual > tol.moment) ++out.violations;
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), total));
    std::vector<detail::CampaignPartial> partials(n_threads,
                                                  detail::CampaignPartial(weights.size()));
    if (n_threads <= 1) {
        run_range(0, total, partials[0]);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::size_t begin = std::min<std::size_t>(t * chunk, total);
            const std::size_t end = std::min<std::size_t>(begin + chunk, total);
            pool.emplace_back([&, begin, end, t] { run_range(begin, end, partials[t]); });
        }
        for (auto& th : pool) th.join();
    }
    detail::CampaignPartial agg = partials[0];
    for (unsigned t = 1; t < n_threads; ++t) agg.merge(partials[t]);

    CampaignReport rep;
    rep.samples = total;
    rep.violations = agg.violations;
    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        const auto& wc = agg.theorem[wi];
        rep.checks.push_back({"theorem1[" + weights[wi].describe() + "]", wc.lhs,
                              bounds_per_weight[wi], wc.slack, wc.slack >= -tol.theorem});
        if (wc.slack < rep.min_slack ||
            (wc.slack == rep.min_slack && wc.index < rep.argmin_index)) {
            rep.min_slack = wc.slack;
            rep.argmin_index = wc.index;
        }
    }
    rep.checks.push_back({"proposition1", agg.proposition.lhs, peak, agg.proposition.slack,
                          agg.proposition.slack >= -tol.proposition});
    rep.checks.push_back({"envelope_pos", agg.env_pos.lhs, 0.0, agg.env_pos.slack,
                          agg.env_pos.slack >= -tol.envelope});
    rep.checks.push_back({"envelope_neg", agg.env_neg.lhs, 0.0, agg.env_neg.slack,
                          agg.env_neg.slack >= -tol.envelope});
    rep.checks.push_back({"moment_identity", agg.moment.lhs, tol.moment, agg.moment.slack,
                          agg.moment.slack >= 0.0});
    rep.argmin_sample = sample_at(rep.argmin_index);
    return rep;
}

/// Single-weight convenience overload.
inline CampaignReport campaign(const Bounds& b, const MonotoneWeight& w,
                               std::size_t n_samples, const SamplerConfig& cfg,
                               const std::vector<StepFunction>& extras = {},
                               unsigned threads = 0) {
    return campaign(b, std::vector<MonotoneWeight>{w}, n_samples, cfg, extras, threads);
}

} // namespace meanzero
