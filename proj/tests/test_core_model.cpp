#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "meanzero/bounds.hpp"
#include "meanzero/piecewise_linear.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"
#include "oracles.hpp"

using namespace meanzero;

TEST_CASE("bounds: derived constants") {
    const Bounds sym = make_bounds(-1.0, 1.0);
    CHECK(sym.peak() == 0.5);
    CHECK(sym.crossover0() == 0.5);
    CHECK(sym.crossover1() == 0.5);

    // h* = -mM/(M-m) = 2/3, c0 = 1/3 for (-1, 2)
    const Bounds b = make_bounds(-1.0, 2.0);
    CHECK_THAT(b.peak(), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-16));
    CHECK_THAT(b.crossover0(), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-16));
    CHECK_THAT(b.crossover1(), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-16));
}

TEST_CASE("bounds: rejects infeasible boxes") {
    CHECK_THROWS_AS(make_bounds(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bounds(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bounds(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bounds(-2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bounds(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bounds(-1.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("bounds: derived-constant invariants on random boxes") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        const double m = -std::exp(6.0 * rng.next_double() - 3.0);
        const double M = std::exp(6.0 * rng.next_double() - 3.0);
        const Bounds b = make_bounds(m, M);
        CHECK(b.peak() > 0.0);
        CHECK(b.peak() < std::fmin(-m, M));
        CHECK(b.crossover0() > 0.0);
        CHECK(b.crossover0() < 1.0);
        CHECK(b.crossover1() > 0.0);
        CHECK(b.crossover1() < 1.0);
        CHECK(b.crossover0() + b.crossover1() == 1.0);
    }
}

TEST_CASE("step function: construction guards") {
    CHECK_THROWS_AS(StepFunction({0.0, 0.5}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument); // zero-width cell
    CHECK_THROWS_AS(StepFunction({0.1, 0.5, 1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({0.0, 0.5, 0.9}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({0.0, 0.7, 0.5, 1.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({0.0, 1.0}, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("step function: evaluation and cells are right-open") {
    const StepFunction f({0.0, 0.5, 1.0}, {1.0, -1.0});
    CHECK(f(0.0) == 1.0);
    CHECK(f(0.49) == 1.0);
    CHECK(f(0.5) == -1.0);
    CHECK(f(1.0) == -1.0);
    CHECK_THROWS_AS(f(-0.1), std::domain_error);
    CHECK_THROWS_AS(f(1.1), std::domain_error);
}

TEST_CASE("step function: mean") {
    CHECK(StepFunction({0.0, 1.0}, {0.0}).mean() == 0.0);
    CHECK(StepFunction({0.0, 0.5, 1.0}, {1.0, 0.0}).mean() == 0.5);
    // 2*(1/3) + (-1)*(2/3) = 0
    const StepFunction f({0.0, 1.0 / 3.0, 1.0}, {2.0, -1.0});
    CHECK(std::fabs(f.mean()) <= 1e-16);
}

TEST_CASE("step function: primitive matches cumulative sums") {
    const PiecewiseLinear zero = primitive(StepFunction({0.0, 1.0}, {0.0}));
    CHECK(zero.values() == std::vector<double>{0.0, 0.0});

    // cumulative sums: (0, 2/3, 0)
    const double third = 1.0 / 3.0;
    const PiecewiseLinear J = primitive(StepFunction({0.0, third, 1.0}, {2.0, -1.0}));
    CHECK(J.nodes() == std::vector<double>{0.0, third, 1.0});
    CHECK(J.values()[0] == 0.0);
    CHECK_THAT(J.values()[1], Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-16));
    CHECK(std::fabs(J.values()[2]) <= 1e-16);

    const PiecewiseLinear tent = primitive(StepFunction({0.0, 0.5, 1.0}, {1.0, -1.0}));
    CHECK(tent(0.5) == 0.5);
    CHECK(tent(0.25) == 0.25);
    CHECK(tent(1.0) == 0.0);
}

TEST_CASE("step function: refinement leaves mean and primitive alone") {
    const Bounds b = make_bounds(-1.0, 2.0);
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const StepFunction f = oracles::random_admissible(b, 7, 11, trial);
        std::vector<double> extra;
        for (int i = 0; i < 9; ++i) extra.push_back(rng.next_double());
        const StepFunction fr = f.refined(extra);

        CHECK(fr.mean() == f.mean());

        const PiecewiseLinear J = primitive(f);
        const PiecewiseLinear Jr = primitive(fr);
        for (std::size_t i = 0; i < J.nodes().size(); ++i) {
            const double x = J.nodes()[i];
            const double scale = std::fmax(1.0, std::fabs(J.values()[i]));
            CHECK(std::fabs(Jr(x) - J.values()[i]) <= 1e-15 * scale);
        }
    }
}

TEST_CASE("step function: primitive is linear in f") {
    const Bounds b = make_bounds(-1.0, 1.0);
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const StepFunction f = oracles::random_admissible(b, 6, 3, 2 * trial);
        const StepFunction g = oracles::random_admissible(b, 9, 3, 2 * trial + 1);
        const double a = 2.0 * rng.next_double() - 1.0;
        const double c = 2.0 * rng.next_double() - 1.0;

        // combine on the merged grid
        std::vector<double> bp = f.breakpoints();
        bp.insert(bp.end(), g.breakpoints().begin(), g.breakpoints().end());
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        std::vector<double> vals(bp.size() - 1);
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            vals[i] = a * f(bp[i]) + c * g(bp[i]);
        const PiecewiseLinear Jc = primitive(StepFunction(bp, vals));

        const PiecewiseLinear Jf = primitive(f);
        const PiecewiseLinear Jg = primitive(g);
        for (std::size_t i = 0; i < Jc.nodes().size(); ++i) {
            const double x = Jc.nodes()[i];
            CHECK(std::fabs(Jc.values()[i] - (a * Jf(x) + c * Jg(x))) <= 1e-13);
        }
    }
}

TEST_CASE("step function: primitive slopes stay inside the box") {
    const Bounds b = make_bounds(-0.5, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const StepFunction f = oracles::random_admissible(b, 33, 17, trial);
        REQUIRE(f.is_admissible(b));
        const PiecewiseLinear J = primitive(f);
        for (std::size_t s = 0; s < J.segment_count(); ++s) {
            CHECK(J.slope(s) >= b.m() - 1e-12);
            CHECK(J.slope(s) <= b.M() + 1e-12);
        }
    }
}

TEST_CASE("moment identity: int x f = -int J(f) for admissible f") {
    const Bounds b = make_bounds(-1.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const StepFunction f = oracles::random_admissible(b, 16, 23, trial);
        CHECK(std::fabs(moment_identity_residual(f)) <= 1e-12);
    }
    // cross-check the closed-form first moment against the midpoint rule
    const StepFunction f = oracles::random_admissible(b, 8, 1);
    CHECK_THAT(first_moment(f),
               Catch::Matchers::WithinAbs(oracles::riemann_first_moment(f), 1e-6));
}

TEST_CASE("step function: normalization merges equal neighbours") {
    const StepFunction f({0.0, 0.25, 0.5, 1.0}, {1.0, 1.0, -1.0});
    CHECK(f.cell_count() == 3); // no silent merging
    const StepFunction g = f.normalized();
    CHECK(g.cell_count() == 2);
    CHECK(g.breakpoints() == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(g.mean() == f.mean());
}

TEST_CASE("step function: admissibility") {
    const Bounds b = make_bounds(-1.0, 1.0);
    CHECK(StepFunction({0.0, 0.5, 1.0}, {1.0, -1.0}).is_admissible(b));
    CHECK_FALSE(StepFunction({0.0, 0.5, 1.0}, {1.5, -1.5}).is_admissible(b));
    CHECK_FALSE(StepFunction({0.0, 0.5, 1.0}, {1.0, -0.9}).is_admissible(b)); // mean != 0
}

TEST_CASE("weight: evaluation on the three families") {
    const MonotoneWeight p2 = MonotoneWeight::power(2.0);
    CHECK(p2(0.5) == 0.25);
    CHECK(p2(0.0) == 0.0);

    const MonotoneWeight log0 = MonotoneWeight::shifted_log(0.0);
    CHECK(log0(1.0) == 0.0);
    CHECK(log0(0.0) == -kInf); // extended-real contract at the origin

    const MonotoneWeight tab = MonotoneWeight::table({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5});
    CHECK(tab(0.5) == 0.5);
    CHECK(tab(1.5) == 1.25);
    CHECK(tab(2.0) == 1.5);
    CHECK(tab.domain_cap() == 2.0);
    CHECK_THROWS_AS(tab(2.5), std::domain_error); // beyond last knot
    CHECK_THROWS_AS(p2(-0.1), std::domain_error);
}

TEST_CASE("weight: construction guards") {
    CHECK_THROWS_AS(MonotoneWeight::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneWeight::power(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneWeight::shifted_log(-0.1), std::invalid_argument);
    // decreasing table rejected, slack below the monotonicity tolerance accepted
    CHECK_THROWS_AS(MonotoneWeight::table({0.0, 1.0}, {1.0, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(MonotoneWeight::table({0.0, 1.0}, {1.0, 1.0 - 5e-15}));
    CHECK_THROWS_AS(MonotoneWeight::table({0.5, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneWeight::table({0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("weight: sampled monotonicity") {
    const std::vector<MonotoneWeight> weights = {
        MonotoneWeight::power(0.5), MonotoneWeight::power(3.0),
        MonotoneWeight::shifted_log(0.0), MonotoneWeight::shifted_log(0.7),
        MonotoneWeight::table({0.0, 0.2, 0.9, 1.5}, {-1.0, 0.0, 0.0, 2.5})};
    for (const auto& w : weights) {
        const double T = std::fmin(w.domain_cap(), 1.5);
        double prev = -kInf;
        for (int i = 1; i <= 200; ++i) {
            const double x = T * i / 200.0;
            const double v = w(x);
            CHECK(v >= prev - 1e-14);
            prev = v;
        }
    }
}
