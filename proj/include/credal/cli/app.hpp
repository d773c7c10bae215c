#pragma once

// Command-line driver, separated from argument parsing so it can run
// in-process against string streams.

#include "credal/cli/problem.hpp"

#include <fstream>
#include <iostream>

namespace credal::cli {

enum ExitCode : int { exit_ok = 0, exit_invalid = 2, exit_oracle_failed = 3, exit_unreachable = 4 };

enum class OutputFormat { automatic, json, csv };

struct Options {
    std::string input = "-";
    std::optional<BallFamily> ball;
    std::optional<double> delta;
    std::optional<Sweep> sweep;
    std::optional<double> radius;
    /// Present when an oracle check is requested; 0 picks the default resolution.
    std::optional<std::size_t> oracle_resolution;
    OutputFormat output = OutputFormat::automatic;
    bool quiet = false;
};

namespace detail {

inline ProblemFile load(const Options& opt, std::istream& in) {
    if (opt.input == "-") return parse_problem(in);
    std::ifstream file(opt.input);
    if (!file) bad("cannot open input file " + opt.input);
    return parse_problem(file);
}

inline void apply_overrides(ProblemFile& pf, const Options& opt) {
    if (opt.delta && opt.sweep) bad("--delta and --sweep are mutually exclusive");
    if (opt.ball) pf.ball = opt.ball;
    if (opt.delta) {
        pf.delta = opt.delta;
        pf.sweep.reset();
    }
    if (opt.sweep) {
        pf.sweep = opt.sweep;
        pf.delta.reset();
    }
    if (opt.radius) pf.radius = RadiusQuery{*opt.radius};
    if (!pf.ball) bad("no ball family given (file \"ball\" or --ball)");
    if (!pf.radius && !pf.delta && !pf.sweep) bad("give exactly one of \"delta\" or \"sweep\"");
}

inline void write_sweep_json(const Instance& inst, const Sweep& s, std::ostream& out) {
    json rows = json::array();
    for (double d : sweep_deltas(s)) {
        json row = bound_json(inst, d);
        row.erase("minimizer");
        rows.push_back(std::move(row));
    }
    out << rows.dump(2) << '\n';
}

} // namespace detail

inline int run(const Options& opt, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto fail = [&](int code, const std::string& msg) {
        if (!opt.quiet) err << "credal: " << msg << '\n';
        return code;
    };
    try {
        ProblemFile pf = detail::load(opt, in);
        detail::apply_overrides(pf, opt);
        const Instance inst = instantiate(pf, *pf.ball);

        if (pf.radius) {
            out << radius_json(inst, pf.radius->threshold).dump(2) << '\n';
            return exit_ok;
        }
        if (pf.sweep) {
            if (opt.oracle_resolution) return fail(exit_invalid, "InvalidProblem: --oracle-check needs a single delta");
            if (opt.output == OutputFormat::json)
                detail::write_sweep_json(inst, *pf.sweep, out);
            else
                out << sweep_csv(inst, *pf.sweep);
            return exit_ok;
        }

        const double delta = *pf.delta;
        if (opt.oracle_resolution) {
            const OracleCheck check = oracle_check(inst, delta, *opt.oracle_resolution);
            out << check.to_json().dump(2) << '\n';
            return check.pass() ? exit_ok : fail(exit_oracle_failed, "oracle check failed");
        }
        if (opt.output == OutputFormat::csv) {
            const std::string csv = sweep_csv(inst, Sweep{delta, delta, 2});
            out << csv.substr(0, csv.find('\n', csv.find('\n') + 1) + 1);
        } else {
            out << bound_json(inst, delta).dump(2) << '\n';
        }
        return exit_ok;
    } catch (const Error& e) {
        return fail(e.kind() == ErrorKind::Unreachable ? exit_unreachable : exit_invalid, e.what());
    }
}

} // namespace credal::cli
