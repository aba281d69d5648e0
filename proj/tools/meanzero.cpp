/**
 * @file meanzero.cpp
 * @brief CLI: bound evaluation, extremizer dumps, randomized
 *        verification, extremal search, and K-monotonicity checks.
 *
 * Exit codes: 0 pass, 1 mathematical violation found, 2 configuration
 * error, 3 I/O error. No other codes.
 */

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meanzero/meanzero.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

using meanzero::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct BoundsArgs {
    double m = 0.0;
    double M = 0.0;
};

void add_bounds_flags(CLI::App& cmd, BoundsArgs& args) {
    cmd.add_option("--m", args.m, "lower bound m (requires m < 0)")->required();
    cmd.add_option("--M", args.M, "upper bound M (requires M > 0)")->required();
}

int cmd_bounds(const BoundsArgs& ba, const std::string& phi_spec, bool as_json) {
    const meanzero::Bounds b = meanzero::make_bounds(ba.m, ba.M);
    const meanzero::MonotoneWeight w = meanzero::parse_weight_spec(phi_spec);
    const double theorem = meanzero::theorem1_bound(b, w);

    std::optional<double> cor1;
    if (w.kind() == meanzero::WeightKind::power)
        cor1 = meanzero::corollary1_bound(b, w.param());

    if (as_json) {
        ordered_json j;
        j["m"] = b.m();
        j["M"] = b.M();
        j["h_star"] = b.peak();
        j["c0"] = b.crossover0();
        j["c1"] = b.crossover1();
        j["weight"] = phi_spec;
        j["theorem1"] = theorem;
        if (cor1)
            j["corollary1"] = ordered_json{{"p", w.param()}, {"bound", *cor1}};
        else
            j["corollary1"] = nullptr;
        j["corollary2"] = meanzero::corollary2_bound(b);
        j["proposition1"] = meanzero::proposition1_bound(b);
        j["perfetti"] = meanzero::perfetti_bound(b);
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("bounds m=%s M=%s\n", fmt(b.m()).c_str(), fmt(b.M()).c_str());
        std::printf("h_star        %s\n", fmt(b.peak()).c_str());
        std::printf("c0            %s\n", fmt(b.crossover0()).c_str());
        std::printf("c1            %s\n", fmt(b.crossover1()).c_str());
        std::printf("theorem1[%s]  %s\n", phi_spec.c_str(), fmt(theorem).c_str());
        if (cor1) std::printf("corollary1    %s\n", fmt(*cor1).c_str());
        std::printf("corollary2    %s\n", fmt(meanzero::corollary2_bound(b)).c_str());
        std::printf("proposition1  %s\n", fmt(meanzero::proposition1_bound(b)).c_str());
        std::printf("perfetti      %s\n", fmt(meanzero::perfetti_bound(b)).c_str());
    }
    return kExitPass;
}

int cmd_extremal(const BoundsArgs& ba, const std::string& which, std::size_t grid,
                 const std::string& out_path) {
    const meanzero::Bounds b = meanzero::make_bounds(ba.m, ba.M);
    if (which != "f0" && which != "f1")
        throw std::invalid_argument("--which must be f0 or f1");
    const auto choice =
        which == "f0" ? meanzero::ExtremalChoice::f0 : meanzero::ExtremalChoice::f1;
    if (grid < 1) throw std::invalid_argument("--grid must be >= 1");

    const meanzero::StepFunction f = meanzero::extremal(b, choice);
    const meanzero::PiecewiseLinear J = meanzero::primitive(f);

    // Sample points: uniform grid plus the exact breakpoints.
    std::vector<double> xs;
    xs.reserve(grid + 3);
    for (std::size_t i = 0; i <= grid; ++i)
        xs.push_back(static_cast<double>(i) / static_cast<double>(grid));
    xs.back() = 1.0;
    for (double bp : f.breakpoints()) xs.push_back(bp);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::ofstream out(out_path);
    if (!out) throw meanzero::io_error("cannot open output file: " + out_path);
    out << "x,f,J\n";
    for (double x : xs)
        out << fmt(x) << ',' << fmt(f(x)) << ',' << fmt(J(x)) << '\n';
    out.flush();
    if (!out.good()) throw meanzero::io_error("write failed: " + out_path);
    return kExitPass;
}

int cmd_verify(const BoundsArgs& ba, const std::string& phi_spec, std::size_t samples,
               std::size_t cells, std::uint64_t seed, const std::string& scheme,
               const std::string& report_path, unsigned threads, bool timing) {
    const meanzero::Bounds b = meanzero::make_bounds(ba.m, ba.M);
    const meanzero::MonotoneWeight w = meanzero::parse_weight_spec(phi_spec);
    meanzero::SamplerConfig cfg{cells, seed, meanzero::scheme_from_name(scheme)};

    const auto t0 = std::chrono::steady_clock::now();
    const meanzero::CampaignReport camp =
        meanzero::campaign(b, std::vector<meanzero::MonotoneWeight>{w}, samples, cfg, {}, threads);
    const meanzero::EqualityReport eq = meanzero::certify_equality(b, w);
    const auto t1 = std::chrono::steady_clock::now();

    std::optional<double> elapsed;
    if (timing) elapsed = std::chrono::duration<double>(t1 - t0).count();

    const meanzero::VerificationReport rep =
        meanzero::make_verification_report(b, phi_spec, cfg, camp, eq, elapsed);

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw meanzero::io_error("cannot open report file: " + report_path);
        out << meanzero::to_json(rep).dump(2) << '\n';
        out.flush();
        if (!out.good()) throw meanzero::io_error("write failed: " + report_path);
    }

    const bool pass = rep.pass();
    std::printf("verify %s: samples=%zu violations=%zu min_slack=%s equality_gap=(%s, %s) -> %s\n",
                phi_spec.c_str(), rep.samples, rep.violations, fmt(rep.min_slack).c_str(),
                fmt(eq.gap_f0).c_str(), fmt(eq.gap_f1).c_str(), pass ? "PASS" : "FAIL");
    return pass ? kExitPass : kExitViolation;
}

int cmd_search(const BoundsArgs& ba, const std::string& phi_spec, std::size_t cells,
               const std::string& strategy_name, std::size_t restarts, std::uint64_t seed,
               bool assume_convex) {
    const meanzero::Bounds b = meanzero::make_bounds(ba.m, ba.M);
    const meanzero::MonotoneWeight w = meanzero::parse_weight_spec(phi_spec);

    meanzero::SearchStrategy strategy;
    if (strategy_name == "vertex") {
        strategy = meanzero::SearchStrategy::vertex_enum();
        strategy.assume_convex = assume_convex;
    } else if (strategy_name == "local") {
        strategy = meanzero::SearchStrategy::local_search(restarts, seed);
    } else {
        throw std::invalid_argument("--strategy must be vertex or local");
    }

    const meanzero::SearchResult res = meanzero::search_max(b, w, cells, strategy);

    ordered_json j;
    j["m"] = b.m();
    j["M"] = b.M();
    j["weight"] = phi_spec;
    j["cells"] = cells;
    j["strategy"] = strategy_name;
    if (strategy_name == "local") {
        j["restarts"] = restarts;
        j["seed"] = seed;
    }
    j["bound"] = meanzero::theorem1_bound(b, w);
    j["value"] = res.value;
    j["gap"] = res.gap;
    j["certified"] = res.certified;
    j["candidates"] = res.candidates;
    j["best"] = meanzero::to_json(res.best);
    std::printf("%s\n", j.dump(2).c_str());

    return res.gap >= -1e-9 ? kExitPass : kExitViolation;
}

int cmd_lemma(const std::string& phi_spec, double T, std::size_t grid) {
    const meanzero::MonotoneWeight w = meanzero::parse_weight_spec(phi_spec);
    const meanzero::LemmaReport rep = meanzero::lemma_monotonicity_check(w, T, grid);

    ordered_json j;
    j["weight"] = phi_spec;
    j["T"] = T;
    j["grid"] = rep.grid;
    j["violations"] = rep.violations;
    j["max_violation"] = rep.max_violation;
    j["plateau"] = rep.plateau;
    j["tolerance"] = rep.tolerance;
    std::printf("%s\n", j.dump(2).c_str());
    return rep.violations == 0 ? kExitPass : kExitViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sharp bounds on primitives of mean-zero bounded functions"};
    app.require_subcommand(1);

    BoundsArgs ba;
    std::string phi_spec;
    bool as_json = false;

    CLI::App* bounds = app.add_subcommand("bounds", "evaluate all sharp bounds for (m, M)");
    add_bounds_flags(*bounds, ba);
    bounds->add_option("--phi", phi_spec, "weight spec: pow:<p> | log:<eps> | table:<path>")
        ->required();
    bounds->add_flag("--json", as_json, "emit JSON instead of text");

    std::string which = "f0";
    std::size_t grid = 64;
    std::string out_path;
    CLI::App* extremal = app.add_subcommand("extremal", "dump an extremizer and its primitive to CSV");
    add_bounds_flags(*extremal, ba);
    extremal->add_option("--which", which, "f0 or f1");
    extremal->add_option("--grid", grid, "number of uniform sample cells");
    extremal->add_option("--out", out_path, "output CSV path")->required();

    std::size_t samples = 10000;
    std::size_t cells = 64;
    std::uint64_t seed = 0;
    std::string scheme = "uniform_project";
    std::string report_path;
    unsigned threads = 0;
    bool timing = false;
    CLI::App* verify = app.add_subcommand("verify", "randomized verification campaign + equality certificate");
    add_bounds_flags(*verify, ba);
    verify->add_option("--phi", phi_spec, "weight spec")->required();
    verify->add_option("--samples", samples, "number of random samples");
    verify->add_option("--cells", cells, "uniform grid resolution");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--scheme", scheme, "uniform_project or vertex_jitter");
    verify->add_option("--report", report_path, "write the JSON report here");
    verify->add_option("--threads", threads, "worker threads (0 = MEANZERO_THREADS or auto)");
    verify->add_flag("--timing", timing, "record wall time in the report (breaks byte determinism)");

    std::string strategy = "vertex";
    std::size_t restarts = 50;
    bool assume_convex = false;
    CLI::App* search = app.add_subcommand("search", "maximize the weighted integral over the discretized class");
    add_bounds_flags(*search, ba);
    search->add_option("--phi", phi_spec, "weight spec")->required();
    search->add_option("--cells", cells, "grid size n")->required();
    search->add_option("--strategy", strategy, "vertex or local");
    search->add_option("--restarts", restarts, "local search restarts");
    search->add_option("--seed", seed, "local search seed");
    search->add_flag("--assume-convex", assume_convex, "assert convexity for table weights");

    double lemma_T = 1.0;
    std::size_t lemma_grid = 100;
    CLI::App* lemma = app.add_subcommand("lemma", "check monotonicity of K(phi, t) on a grid");
    lemma->add_option("--phi", phi_spec, "weight spec")->required();
    lemma->add_option("--T", lemma_T, "right end of the t grid")->required();
    lemma->add_option("--grid", lemma_grid, "number of grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (bounds->parsed()) return cmd_bounds(ba, phi_spec, as_json);
        if (extremal->parsed()) return cmd_extremal(ba, which, grid, out_path);
        if (verify->parsed())
            return cmd_verify(ba, phi_spec, samples, cells, seed, scheme, report_path,
                              threads, timing);
        if (search->parsed())
            return cmd_search(ba, phi_spec, cells, strategy, restarts, seed, assume_convex);
        if (lemma->parsed()) return cmd_lemma(phi_spec, lemma_T, lemma_grid);
    } catch (const meanzero::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
