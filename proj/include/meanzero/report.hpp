#pragma once

/**
 * @file report.hpp
 * @brief Weight-spec grammar, table CSV loading, and the JSON
 *        verification report.
 *
 * Weight specs are the textual surface `pow:<p> | log:<eps> |
 * table:<path>`; table files are two-column CSV `x,phi` with strictly
 * increasing x starting at 0 and no comments. Reports serialize through
 * nlohmann::ordered_json, whose shortest-round-trip double formatting
 * keeps parse(serialize(r)) == r and makes byte-identical reports the
 * determinism contract of cmd_verify. Timing is opt-in for exactly that
 * reason: a populated wall-clock field would break byte identity.
 */

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "meanzero/bounds.hpp"
#include "meanzero/extremal.hpp"
#include "meanzero/sampling.hpp"
#include "meanzero/step_function.hpp"
#include "meanzero/weight.hpp"

namespace meanzero {

inline constexpr char kToolVersion[] = "0.1.0";
inline constexpr int kReportSchema = 1;

/// Filesystem-level failures; the CLI maps these to exit code 3.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two-column CSV `x,phi`; unreadable file is an io_error, invalid
/// content (including non-monotone values) is an invalid_argument.
inline MonotoneWeight load_table_weight(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read table weight file: " + path);
    std::vector<double> xs, phis;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("table weight line " + std::to_string(lineno) +
                                        ": expected `x,phi`");
        try {
            std::size_t used = 0;
            const std::string xs_text = line.substr(0, comma);
            const std::string ph_text = line.substr(comma + 1);
            const double x = std::stod(xs_text, &used);
            if (used != xs_text.size()) throw std::invalid_argument("trailing junk");
            const double phi = std::stod(ph_text, &used);
            if (used != ph_text.size()) throw std::invalid_argument("trailing junk");
            xs.push_back(x);
            phis.push_back(phi);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("table weight line " + std::to_string(lineno) +
                                        ": malformed number");
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("table weight line " + std::to_string(lineno) +
                                        ": number out of range");
        }
    }
    return MonotoneWeight::table(std::move(xs), std::move(phis));
}

/// Parses `pow:<p> | log:<eps> | table:<path>`.
inline MonotoneWeight parse_weight_spec(const std::string& spec) {
    auto number = [&](const std::string& text) {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size())
                throw std::invalid_argument("weight spec: malformed number `" + text + "`");
            return v;
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("weight spec: number out of range `" + text + "`");
        }
    };
    if (spec.rfind("pow:", 0) == 0) return MonotoneWeight::power(number(spec.substr(4)));
    if (spec.rfind("log:", 0) == 0) return MonotoneWeight::shifted_log(number(spec.substr(4)));
    if (spec.rfind("table:", 0) == 0) return load_table_weight(spec.substr(6));
    throw std::invalid_argument("weight spec must be pow:<p> | log:<eps> | table:<path>");
}

inline const char* scheme_name(SampleScheme s) {
    return s == SampleScheme::uniform_project ? "uniform_project" : "vertex_jitter";
}

inline SampleScheme scheme_from_name(const std::string& name) {
    if (name == "uniform_project") return SampleScheme::uniform_project;
    if (name == "vertex_jitter") return SampleScheme::vertex_jitter;
    throw std::invalid_argument("unknown sampler scheme: " + name);
}

struct VerificationReport {
    int schema = kReportSchema;
    std::string version = kToolVersion;
    double m = 0.0, M = 0.0, h_star = 0.0, c0 = 0.0, c1 = 0.0;
    std::string weight;
    std::vector<CheckRecord> checks;
    std::size_t samples = 0;
    std::size_t cells = 0;
    std::uint64_t seed = 0;
    std::string scheme;
    std::string rng;
    std::size_t violations = 0;
    double min_slack = 0.0;
    std::size_t argmin_seed_index = 0;
    std::optional<StepFunction> argmin_sample;
    std::optional<double> timing_seconds;

    bool pass() const {
        if (violations != 0) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline bool operator==(const CheckRecord& a, const CheckRecord& b) {
    return a.name == b.name && a.lhs == b.lhs && a.rhs == b.rhs && a.slack == b.slack &&
           a.pass == b.pass;
}

inline bool operator==(const VerificationReport& a, const VerificationReport& b) {
    auto same_sample = [](const std::optional<StepFunction>& x,
                          const std::optional<StepFunction>& y) {
        if (x.has_value() != y.has_value()) return false;
        if (!x) return true;
        return x->breakpoints() == y->breakpoints() && x->values() == y->values();
    };
    return a.schema == b.schema && a.version == b.version && a.m == b.m && a.M == b.M &&
           a.h_star == b.h_star && a.c0 == b.c0 && a.c1 == b.c1 && a.weight == b.weight &&
           a.checks == b.checks && a.samples == b.samples && a.cells == b.cells &&
           a.seed == b.seed && a.scheme == b.scheme && a.rng == b.rng &&
           a.violations == b.violations && a.min_slack == b.min_slack &&
           a.argmin_seed_index == b.argmin_seed_index &&
           same_sample(a.argmin_sample, b.argmin_sample) &&
           a.timing_seconds == b.timing_seconds;
}

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const StepFunction& f) {
    return ordered_json{{"breakpoints", f.breakpoints()}, {"values", f.values()}};
}

inline StepFunction step_function_from_json(const ordered_json& j) {
    return StepFunction(j.at("breakpoints").get<std::vector<double>>(),
                        j.at("values").get<std::vector<double>>());
}

inline ordered_json to_json(const CheckRecord& c) {
    return ordered_json{
        {"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"pass", c.pass}};
}

inline ordered_json to_json(const VerificationReport& r) {
    ordered_json j;
    j["schema"] = r.schema;
    j["version"] = r.version;
    j["bounds"] = ordered_json{
        {"m", r.m}, {"M", r.M}, {"h_star", r.h_star}, {"c0", r.c0}, {"c1", r.c1}};
    j["weight"] = r.weight;
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = std::move(checks);
    j["campaign"] = ordered_json{{"samples", r.samples},
                                 {"cells", r.cells},
                                 {"seed", r.seed},
                                 {"scheme", r.scheme},
                                 {"rng", r.rng},
                                 {"violations", r.violations},
                                 {"min_slack", r.min_slack},
                                 {"argmin_seed_index", r.argmin_seed_index}};
    if (r.argmin_sample)
        j["campaign"]["argmin_sample"] = to_json(*r.argmin_sample);
    else
        j["campaign"]["argmin_sample"] = nullptr;
    if (r.timing_seconds)
        j["timing"] = *r.timing_seconds;
    else
        j["timing"] = nullptr;
    return j;
}

inline VerificationReport report_from_json(const ordered_json& j) {
    VerificationReport r;
    r.schema = j.at("schema").get<int>();
    r.version = j.at("version").get<std::string>();
    const auto& b = j.at("bounds");
    r.m = b.at("m").get<double>();
    r.M = b.at("M").get<double>();
    r.h_star = b.at("h_star").get<double>();
    r.c0 = b.at("c0").get<double>();
    r.c1 = b.at("c1").get<double>();
    r.weight = j.at("weight").get<std::string>();
    for (const auto& c : j.at("checks")) {
        CheckRecord rec;
        rec.name = c.at("name").get<std::string>();
        rec.lhs = c.at("lhs").get<double>();
        rec.rhs = c.at("rhs").get<double>();
        rec.slack = c.at("slack").get<double>();
        rec.pass = c.at("pass").get<bool>();
        r.checks.push_back(std::move(rec));
    }
    const auto& camp = j.at("campaign");
    r.samples = camp.at("samples").get<std::size_t>();
    r.cells = camp.at("cells").get<std::size_t>();
    r.seed = camp.at("seed").get<std::uint64_t>();
    r.scheme = camp.at("scheme").get<std::string>();
    r.rng = camp.at("rng").get<std::string>();
    r.violations = camp.at("violations").get<std::size_t>();
    r.min_slack = camp.at("min_slack").get<double>();
    r.argmin_seed_index = camp.at("argmin_seed_index").get<std::size_t>();
    if (!camp.at("argmin_sample").is_null())
        r.argmin_sample = step_function_from_json(camp.at("argmin_sample"));
    if (!j.at("timing").is_null()) r.timing_seconds = j.at("timing").get<double>();
    return r;
}

/**
 * Assembles the cmd_verify report: campaign aggregates plus the
 * equality certificate on both extremizers.
 */
inline VerificationReport make_verification_report(
    const Bounds& b, const std::string& weight_text, const SamplerConfig& cfg,
    const CampaignReport& camp, const EqualityReport& eq,
    std::optional<double> timing_seconds = std::nullopt) {
    VerificationReport r;
    r.m = b.m();
    r.M = b.M();
    r.h_star = b.peak();
    r.c0 = b.crossover0();
    r.c1 = b.crossover1();
    r.weight = weight_text;
    r.checks = camp.checks;
    r.checks.push_back({"equality[f0]", eq.lhs_f0, eq.bound, eq.bound - eq.lhs_f0,
                        eq.gap_f0 <= eq.tolerance});
    r.checks.push_back({"equality[f1]", eq.lhs_f1, eq.bound, eq.bound - eq.lhs_f1,
                        eq.gap_f1 <= eq.tolerance});
    r.samples = camp.samples;
    r.cells = cfg.cells;
    r.seed = cfg.seed;
    r.scheme = scheme_name(cfg.scheme);
    r.rng = camp.rng;
    r.violations = camp.violations;
    r.min_slack = camp.min_slack;
    r.argmin_seed_index = camp.argmin_index;
    r.argmin_sample = camp.argmin_sample;
    r.timing_seconds = timing_seconds;
    return r;
}

} // namespace meanzero
