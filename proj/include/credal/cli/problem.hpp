#pragma once

// Problem files and the batch operations behind the command-line tool.
//
// A problem file is a JSON object
//   { "labels": [..]?, "p": [..], "f": [..], "ball": "tv" | "chi2",
//     "delta": x | "sweep": {"start": a, "stop": b, "steps": k} }
// holding exactly one of "delta" / "sweep". An optional
//   "radius": {"threshold": t, "direction": "lower_below"}
// requests a robustness-radius query instead.

#include "credal/bounds.hpp"
#include "credal/oracle.hpp"
#include "credal/radius.hpp"

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <sstream>

namespace credal::cli {

using nlohmann::json;

struct Sweep {
    double start;
    double stop;
    std::size_t steps;
};

struct RadiusQuery {
    double threshold;
    std::string direction = "lower_below";
};

struct ProblemFile {
    std::vector<std::string> labels;
    std::vector<double> p;
    std::vector<double> f;
    std::optional<BallFamily> ball;
    std::optional<double> delta;
    std::optional<Sweep> sweep;
    std::optional<RadiusQuery> radius;
};

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw Error(ErrorKind::InvalidProblem, what); }

inline double number(const json& j, const char* what) {
    if (!j.is_number()) bad(std::string(what) + " must be a number");
    return j.get<double>();
}

inline std::vector<double> numbers(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(number(v, what));
    return out;
}

} // namespace detail

inline BallFamily parse_family(std::string_view name) {
    if (name == "tv") return BallFamily::tv;
    if (name == "chi2") return BallFamily::chi2;
    detail::bad("ball must be \"tv\" or \"chi2\", got \"" + std::string(name) + "\"");
}

/// Parses "START:STOP:STEPS".
inline Sweep parse_sweep(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) detail::bad("sweep must look like START:STOP:STEPS");
    try {
        std::size_t used = 0;
        const std::string steps_text = text.substr(b + 1);
        const long long steps = std::stoll(steps_text, &used);
        if (used != steps_text.size() || steps < 2) detail::bad("sweep needs an integer STEPS >= 2");
        return {std::stod(text.substr(0, a)), std::stod(text.substr(a + 1, b - a - 1)),
                static_cast<std::size_t>(steps)};
    } catch (const std::logic_error&) {
        detail::bad("sweep must look like START:STOP:STEPS");
    }
}

inline ProblemFile parse_problem(const json& j) {
    if (!j.is_object()) detail::bad("problem file must hold a JSON object");
    ProblemFile pf;
    if (!j.contains("p") || !j.contains("f")) detail::bad("problem file needs both \"p\" and \"f\"");
    pf.p = detail::numbers(j.at("p"), "p");
    pf.f = detail::numbers(j.at("f"), "f");
    if (pf.p.size() != pf.f.size())
        throw Error(ErrorKind::LengthMismatch, "p has " + std::to_string(pf.p.size()) + " entries but f has " +
                                                   std::to_string(pf.f.size()));
    if (pf.p.empty()) throw Error(ErrorKind::EmptySupport, "no outcomes");
    if (j.contains("labels")) {
        if (!j.at("labels").is_array()) detail::bad("labels must be an array of strings");
        for (const auto& l : j.at("labels")) {
            if (!l.is_string()) detail::bad("labels must be an array of strings");
            pf.labels.push_back(l.get<std::string>());
        }
    }
    if (j.contains("ball")) {
        if (!j.at("ball").is_string()) detail::bad("ball must be a string");
        pf.ball = parse_family(j.at("ball").get<std::string>());
    }
    if (j.contains("delta") && j.contains("sweep")) detail::bad("give either \"delta\" or \"sweep\", not both");
    if (j.contains("delta")) pf.delta = detail::number(j.at("delta"), "delta");
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (!s.is_object() || !s.contains("start") || !s.contains("stop") || !s.contains("steps"))
            detail::bad("sweep needs start, stop and steps");
        if (!s.at("steps").is_number_integer() || s.at("steps").get<long long>() < 2)
            detail::bad("sweep steps must be an integer >= 2");
        pf.sweep = Sweep{detail::number(s.at("start"), "sweep.start"), detail::number(s.at("stop"), "sweep.stop"),
                         s.at("steps").get<std::size_t>()};
    }
    if (j.contains("radius")) {
        const json& r = j.at("radius");
        if (!r.is_object() || !r.contains("threshold")) detail::bad("radius needs a threshold");
        RadiusQuery q{detail::number(r.at("threshold"), "radius.threshold")};
        if (r.contains("direction")) {
            if (!r.at("direction").is_string() || r.at("direction").get<std::string>() != "lower_below")
                detail::bad("radius direction must be \"lower_below\"");
        }
        pf.radius = q;
    }
    return pf;
}

inline ProblemFile parse_problem(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        detail::bad(std::string("malformed JSON: ") + e.what());
    }
    return parse_problem(j);
}

/// Validated inputs of a problem for a ball family.
struct Instance {
    Pmf p;
    Objective f;
    BallFamily family;
};

inline Instance instantiate(const ProblemFile& pf, BallFamily family) {
    auto [p, f] = validate(pf.p, pf.f, family, pf.labels);
    return {std::move(p), std::move(f), family};
}

/// Radii start + (stop - start) i / (steps - 1), endpoints included exactly.
inline std::vector<double> sweep_deltas(const Sweep& s) {
    if (s.steps < 2) detail::bad("sweep needs at least 2 steps");
    std::vector<double> out(s.steps);
    const double span = s.stop - s.start;
    for (std::size_t i = 0; i < s.steps; ++i)
        out[i] = s.start + span * static_cast<double>(i) / static_cast<double>(s.steps - 1);
    out.back() = s.stop;
    return out;
}

inline json bound_json(const Instance& inst, double delta) {
    const BallSpec ball(inst.family, delta);
    const BoundResult lower = lower_expectation(inst.p, inst.f, ball);
    const BoundResult upper = upper_expectation(inst.p, inst.f, ball);
    json out = {{"value", lower.value},
                {"upper_value", upper.value},
                {"r", lower.active_index},
                {"branch", to_string(lower.branch)},
                {"minimizer", std::vector<double>(lower.minimizer.weights().begin(), lower.minimizer.weights().end())},
                {"delta", delta},
                {"ball", to_string(inst.family)}};
    if (!inst.p.labels().empty()) out["labels"] = inst.p.labels();
    return out;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// CSV rows "delta,lower,upper,r,branch" with header, LF line endings.
inline std::string sweep_csv(const Instance& inst, const Sweep& s) {
    const std::vector<double> deltas = sweep_deltas(s);
    std::ostringstream out;
    out << "delta,lower,upper,r,branch\n";
    for (double d : deltas) {
        const BallSpec ball(inst.family, d);
        const BoundResult lower = lower_expectation(inst.p, inst.f, ball);
        const double upper = upper_expectation(inst.p, inst.f, ball).value;
        out << format_double(d) << ',' << format_double(lower.value) << ',' << format_double(upper) << ','
            << lower.active_index << ',' << to_string(lower.branch) << '\n';
    }
    return out.str();
}

struct OracleCheck {
    double closed_form;
    double grid_minimum;
    double tolerance;
    std::size_t resolution;
    bool minimizer_feasible;

    /// 0 <= grid_minimum - closed_form <= tolerance and the closed-form
    /// minimizer passes the oracle's own feasibility check.
    bool pass() const noexcept {
        const double gap = grid_minimum - closed_form;
        return gap >= 0.0 && gap <= tolerance && minimizer_feasible;
    }

    json to_json() const {
        return {{"closed_form", closed_form},   {"grid_minimum", grid_minimum},
                {"tolerance", tolerance},       {"resolution", resolution},
                {"minimizer_feasible", minimizer_feasible}, {"pass", pass()}};
    }
};

/// Compares a closed-form result against the grid oracle.
inline OracleCheck oracle_check(const Instance& inst, const BallSpec& ball, const BoundResult& closed,
                                std::size_t resolution = 0) {
    const oracle::OracleReport report = oracle::lower_expectation(inst.p, inst.f, ball, resolution);
    const oracle::MinimizerCheck mc = oracle::check_minimizer(inst.p, inst.f, ball, closed.minimizer, closed.value);
    return {closed.value, report.grid_minimum, report.tolerance, report.resolution, mc.ok()};
}

inline OracleCheck oracle_check(const Instance& inst, double delta, std::size_t resolution = 0) {
    const BallSpec ball(inst.family, delta);
    return oracle_check(inst, ball, lower_expectation(inst.p, inst.f, ball), resolution);
}

inline json radius_json(const Instance& inst, double theta) {
    const double radius = robustness_radius(inst.p, inst.f, inst.family, theta);
    return {{"radius", radius},
            {"threshold", theta},
            {"ball", to_string(inst.family)},
            {"lower_at_radius", lower_expectation(inst.p, inst.f, BallSpec(inst.family, radius)).value}};
}

} // namespace credal::cli
