// credal: lower/upper expectations over TV and chi2 balls from the command line.

#include "credal/cli/app.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    using namespace credal::cli;

    CLI::App app{"Lower and upper expectations over total-variation and chi-squared balls"};
    Options opt;

    std::string ball, sweep, output = "auto";
    double delta = 0.0, radius = 0.0;
    std::size_t resolution = 0;

    app.add_option("--input", opt.input, "Problem file (JSON), or - for stdin")->capture_default_str();
    auto* ball_opt = app.add_option("--ball", ball, "Ball family, overrides the file")->check(CLI::IsMember({"tv", "chi2"}));
    auto* delta_opt = app.add_option("--delta", delta, "Single radius");
    auto* sweep_opt = app.add_option("--sweep", sweep, "Radius sweep START:STOP:STEPS");
    auto* radius_opt = app.add_option("--radius", radius, "Smallest radius where the lower bound reaches THETA");
    auto* oracle_opt = app.add_option("--oracle-check", resolution, "Verify against the grid oracle [RESOLUTION]")
                           ->expected(0, 1);
    app.add_option("--output", output, "json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));
    app.add_flag("--quiet", opt.quiet, "No diagnostics on stderr");
    delta_opt->excludes(sweep_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    try {
        if (*ball_opt) opt.ball = parse_family(ball);
        if (*delta_opt) opt.delta = delta;
        if (*sweep_opt) opt.sweep = parse_sweep(sweep);
        if (*radius_opt) opt.radius = radius;
        if (*oracle_opt) opt.oracle_resolution = resolution;
    } catch (const credal::Error& e) {
        if (!opt.quiet) std::cerr << "credal: " << e.what() << '\n';
        return exit_invalid;
    }
    if (output == "json") opt.output = OutputFormat::json;
    if (output == "csv") opt.output = OutputFormat::csv;

    return run(opt, std::cin, std::cout, std::cerr);
}
