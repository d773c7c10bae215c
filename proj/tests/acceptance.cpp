// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "credal/cli/app.hpp"
#include "credal/credal.hpp"
#include "support/instances.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

using namespace credal;
using namespace credal::testing;

namespace {

class Criterion {
public:
    explicit Criterion(std::string name) : name_(std::move(name)) {}

    void check(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        if (failures_++ == 0) first_failure_ = what;
    }

    bool report(std::ostream& out, double seconds) const {
        out << (failures_ == 0 ? "[PASS] " : "[FAIL] ") << name_ << " (" << checks_ << " checks, " << seconds << " s)";
        if (failures_ > 0) out << " -- " << failures_ << " failed, first: " << first_failure_;
        out << '\n';
        return failures_ == 0;
    }

private:
    std::string name_;
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string first_failure_;
};

std::string describe(const Pmf& p, const Objective& f, double delta) {
    std::ostringstream s;
    s.precision(17);
    s << "p=(";
    for (std::size_t i = 0; i < p.size(); ++i) s << (i ? "," : "") << p[i];
    s << ") f=(";
    for (std::size_t i = 0; i < f.size(); ++i) s << (i ? "," : "") << f[i];
    s << ") delta=" << delta;
    return s.str();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// --- 1, 2: grid-oracle sandwich --------------------------------------------

void oracle_sandwich(Criterion& c, BallFamily family, std::uint64_t seed, double delta_max, double min_weight) {
    Rng rng(seed);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = uniform_size(rng, 2, 4);
        const std::size_t res = oracle::default_resolution(n);
        const auto min_count = static_cast<std::size_t>(std::llround(min_weight * static_cast<double>(res)));
        const Pmf p = pmf(grid_simplex(rng, n, res, min_count));
        const Objective f = objective(uniform_values(rng, n));
        const BallSpec ball(family, uniform_real(rng, 0.0, delta_max));
        const std::string ctx = describe(p, f, ball.delta());

        const BoundResult closed = lower_expectation(p, f, ball);
        const double tol = (f.max() - f.min()) * static_cast<double>(n) / static_cast<double>(res);
        try {
            const oracle::OracleReport report = oracle::lower_expectation(p, f, ball, res);
            const double gap = report.grid_minimum - closed.value;
            c.check(gap >= 0.0 && gap <= tol, "sandwich gap " + std::to_string(gap) + " for " + ctx);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmptyFeasible) throw;
            c.check(near(closed.value, expectation(p, f), tol), "empty grid, closed form far from E_p(f) for " + ctx);
        }
        const oracle::MinimizerCheck mc = oracle::check_minimizer(p, f, ball, closed.minimizer, closed.value);
        c.check(mc.feasible, "minimizer outside the ball (d=" + std::to_string(mc.distance) + ") for " + ctx);
        c.check(mc.reproduces_value, "minimizer does not reproduce the value for " + ctx);
    }
}

// --- 3: TV minimizer structure ---------------------------------------------

void tv_structure(Criterion& c, const Pmf& p, const Objective& f, double delta) {
    const std::string ctx = describe(p, f, delta);
    const BoundResult res = tv_lower_expectation(p, f, delta);
    const SortedProblem sp = sort_and_prefix(p, f);
    const std::size_t n = p.size();
    const double moved = std::min(delta, 1.0 - sp.p(1));
    c.check(near(tv_distance(res.minimizer, p), moved, 1e-12), "tv distance != min(delta, 1-p1) for " + ctx);

    std::vector<double> q(n);
    for (std::size_t k = 0; k < n; ++k) q[k] = res.minimizer[sp.perm()[k]];
    const std::size_t r = res.active_index;
    if (r == 1) {
        c.check(q[0] == 1.0, "r=1 minimizer is not a point mass for " + ctx);
        for (std::size_t k = 1; k < n; ++k) c.check(q[k] == 0.0, "r=1 tail not zero for " + ctx);
        return;
    }
    c.check(near(q[0], sp.p(1) + delta, 1e-12), "first coordinate not raised by delta for " + ctx);
    for (std::size_t k = 2; k < r; ++k) c.check(near(q[k - 1], sp.p(k), 1e-12), "middle coordinate touched for " + ctx);
    c.check(q[r - 1] > 0.0 && q[r - 1] <= sp.p(r) + 1e-12, "x_r not partially drained for " + ctx);
    for (std::size_t k = r + 1; k <= n; ++k) c.check(q[k - 1] == 0.0, "tail not zero for " + ctx);
}

// --- 4, 5: chi2 critical radii and branch consistency -----------------------

void chi2_ordering(Criterion& c, const Pmf& p, const Objective& f) {
    const SortedProblem sp = sort_and_prefix(p, f);
    const CriticalDeltas cd = critical_deltas(sp);
    c.check(cd.at(sp.plateau()).is_unbounded(), "delta_l is not unbounded");
    const auto d = cd.finite_values();
    for (std::size_t i = 0; i < d.size(); ++i) {
        c.check(std::isfinite(d[i]) && d[i] > 0.0, "finite critical radius not positive for " + describe(p, f, 0));
        if (i + 1 < d.size())
            c.check(d[i + 1] - d[i] <= 1e-12 * std::max(1.0, d[i]),
                    "critical radii invert by " + std::to_string(d[i + 1] - d[i]) + " for " + describe(p, f, 0));
    }
}

void chi2_consistency(Criterion& c, const Pmf& p, const Objective& f, double delta) {
    const std::string ctx = describe(p, f, delta);
    const SortedProblem sp = sort_and_prefix(p, f);
    const CriticalDeltas cd = critical_deltas(sp);
    for (std::size_t k = sp.plateau() + 1; k <= sp.size(); ++k) {
        const double dk = cd.at(k).value();
        const double left = chi2_branch_value(sp, k, dk);
        const double right = chi2_branch_value(sp, k - 1, dk);
        c.check(near(left, right, 1e-9 * (1.0 + std::abs(left))), "value jumps at delta_k for " + ctx);
        c.check(std::abs(chi2_candidate(sp, k, dk)[k - 1]) <= 1e-9, "q_k(x_k) does not vanish at delta_k for " + ctx);
    }
    const std::size_t r = chi2_active_index(cd, delta);
    const Pmf q = chi2_minimizer(sp, r, delta);
    const double div = chi2_divergence(q.weights(), sp.p_sorted());
    if (r > sp.plateau())
        c.check(near(div, delta, 1e-9), "interior minimizer not on the boundary for " + ctx);
    else
        c.check(div <= delta + 1e-12, "plateau minimizer outside the ball for " + ctx);
}

// --- 6: special-case closed forms -------------------------------------------

void special_cases(Criterion& c, const Pmf& p, const Objective& f, double delta) {
    const double general = chi2_lower_expectation(p, f, delta).value;
    const double direct = p.size() == 2 ? chi2_two_point(p, f, delta) : chi2_three_point(p, f, delta);
    c.check(near(general, direct, 1e-12), "special case differs by " + std::to_string(general - direct) + " for " +
                                              describe(p, f, delta));
}

// --- 7: lower-expectation axioms --------------------------------------------

void axioms(Criterion& c, const Pmf& p, const Objective& f, BallFamily family, double delta, Rng& rng) {
    const std::string ctx = std::string(to_string(family)) + " " + describe(p, f, delta);
    const BallSpec ball(family, delta);
    const BoundResult low = lower_expectation(p, f, ball);
    const double scale = scale_of(f);

    const double shift = uniform_real(rng, -5.0, 5.0);
    const double shifted = lower_expectation(p, affine(f, 1.0, shift), ball).value;
    c.check(near(shifted, low.value + shift, 1e-9 * (scale + std::abs(shift))), "translation equivariance fails for " + ctx);

    const double lambda = uniform_real(rng, 0.0, 10.0);
    const double scaled = lower_expectation(p, affine(f, lambda, 0.0), ball).value;
    c.check(near(scaled, lambda * low.value, 1e-9 * (1.0 + lambda) * scale), "positive homogeneity fails for " + ctx);

    const double larger = delta + uniform_real(rng, 0.0, 1.0);
    c.check(lower_expectation(p, f, BallSpec(family, larger)).value <= low.value + 1e-9 * scale,
            "not monotone in delta for " + ctx);

    c.check(low.value >= f.min() - 1e-9 * scale, "value below min f for " + ctx);
    c.check(low.value <= expectation(p, f) + 1e-9 * scale, "value above E_p(f) for " + ctx);
    c.check(near(expectation(low.minimizer, f), low.value, 1e-9 * scale), "minimizer does not reproduce value for " + ctx);

    const double upper = upper_expectation(p, f, ball).value;
    c.check(upper == -lower_expectation(p, f.negated(), ball).value, "conjugacy is not exact for " + ctx);
    c.check(upper >= low.value - 1e-12 * scale, "upper below lower for " + ctx);
}

// --- 9: CLI round trip -------------------------------------------------------

struct ProcessResult {
    int code;
    std::string out;
};

ProcessResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CREDAL_CLI_PATH) + " " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe.get())) out.append(buf, got);
    const int status = pclose(pipe.release());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void cli_round_trip(Criterion& c) {
    const std::string fixtures = CREDAL_FIXTURES_DIR;
    for (const char* fixture : {"/tv_classifier.json", "/chi2_symmetric.json", "/tv_sweep.json"}) {
        const ProcessResult sweep = run_cli("--input " + fixtures + fixture + " --sweep 0:1:11 --output csv");
        c.check(sweep.code == 0, std::string("sweep exit code for ") + fixture);
        std::istringstream in(sweep.out);
        std::string line;
        std::getline(in, line);
        c.check(line == "delta,lower,upper,r,branch", "csv header");
        std::vector<double> lower, upper;
        while (std::getline(in, line)) {
            std::stringstream ls(line);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            c.check(cells.size() == 5, "csv row has 5 cells");
            if (cells.size() != 5) continue;
            for (int i = 0; i < 3; ++i) {
                std::size_t used = 0;
                const double v = std::stod(cells[i], &used);
                c.check(used == cells[i].size() && cli::format_double(v) == cells[i], "csv number does not round-trip");
            }
            lower.push_back(std::stod(cells[1]));
            upper.push_back(std::stod(cells[2]));
        }
        c.check(lower.size() == 11, std::string("sweep row count for ") + fixture);
        for (std::size_t i = 1; i < lower.size(); ++i) {
            c.check(lower[i] <= lower[i - 1], std::string("lower column not monotone for ") + fixture);
            c.check(upper[i] >= upper[i - 1], std::string("upper column not monotone for ") + fixture);
        }
    }

    const auto radius_of = [&](const std::string& fixture, const std::string& theta) {
        const ProcessResult r = run_cli("--input " + fixtures + fixture + " --radius " + theta);
        c.check(r.code == 0, "radius exit code for " + fixture);
        try {
            return cli::json::parse(r.out).at("radius").get<double>();
        } catch (const std::exception&) {
            c.check(false, "radius output is not JSON for " + fixture);
            return std::nan("");
        }
    };
    const double tv = radius_of("/tv_classifier.json", "0.5");
    c.check(near(tv, 0.2, 1e-9), "TV radius " + std::to_string(tv) + " != 0.2");
    const double chi = radius_of("/chi2_symmetric.json", "0.25");
    c.check(near(chi, 0.25, 1e-9), "chi2 radius " + std::to_string(chi) + " != 0.25");

    const ProcessResult unreachable = run_cli("--input " + fixtures + "/tv_classifier.json --radius -1 --quiet");
    c.check(unreachable.code == cli::exit_unreachable, "unreachable radius exit code");
    const ProcessResult single = run_cli("--input " + fixtures + "/tv_classifier.json");
    try {
        const cli::json j = cli::json::parse(single.out);
        const Pmf q = Pmf::from_weights(j.at("minimizer").get<std::vector<double>>());
        c.check(near(expectation(q, objective({0, 1})), j.at("value").get<double>(), 1e-9),
                "JSON minimizer does not reproduce the value");
    } catch (const std::exception& e) {
        c.check(false, std::string("single-delta output: ") + e.what());
    }
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    bool all = true;
    const auto run = [&](const std::string& name, const std::function<void(Criterion&)>& body) {
        Criterion c(name);
        const auto t0 = clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.check(false, std::string("exception: ") + e.what());
        }
        all = c.report(std::cout, std::chrono::duration<double>(clock::now() - t0).count()) && all;
    };

    run("1 oracle sandwich, TV ball", [](Criterion& c) { oracle_sandwich(c, BallFamily::tv, 1001, 1.2, 0.0); });
    run("2 oracle sandwich, chi2 ball", [](Criterion& c) { oracle_sandwich(c, BallFamily::chi2, 1002, 3.0, 0.05); });

    run("3 TV minimizer structure", [](Criterion& c) {
        Rng rng(1003);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = uniform_size(rng, 1, 16);
            tv_structure(c, pmf(uniform_simplex(rng, n)), objective(mixed_values(rng, n)), uniform_real(rng, 0.0, 1.2));
        }
    });

    run("4 critical radii ordering", [](Criterion& c) {
        Rng rng(1004);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = uniform_size(rng, 1, 16);
            chi2_ordering(c, pmf(positive_simplex(rng, n, 1e-4)), objective(mixed_values(rng, n)));
        }
    });

    run("5 chi2 branch consistency", [](Criterion& c) {
        Rng rng(1005);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = uniform_size(rng, 2, 16);
            chi2_consistency(c, pmf(positive_simplex(rng, n, 1e-3)), objective(mixed_values(rng, n)),
                             uniform_real(rng, 0.0, 5.0));
        }
    });

    run("6 two- and three-outcome closed forms", [](Criterion& c) {
        const double third = 1.0 / 3.0;
        c.check(near(chi2_two_point(pmf({0.5, 0.5}), objective({0, 1}), 0.25), 0.25, 1e-12), "n=2 worked value");
        c.check(near(chi2_lower_expectation(pmf({0.5, 0.5}), objective({0, 1}), 0.25).value, 0.25, 1e-12),
                "n=2 worked value, general path");
        c.check(near(chi2_three_point(pmf({third, third, third}), objective({0, 1, 2}), 1.0), 0.211324865405187118, 1e-12),
                "n=3 worked value");
        c.check(near(chi2_lower_expectation(pmf({third, third, third}), objective({0, 1, 2}), 1.0).value,
                     0.211324865405187118, 1e-12),
                "n=3 worked value, general path");
        Rng rng(1006);
        for (int trial = 0; trial < 1000; ++trial) {
            special_cases(c, pmf(positive_simplex(rng, 2, 1e-3)), objective(mixed_values(rng, 2)), uniform_real(rng, 0, 5));
            special_cases(c, pmf(positive_simplex(rng, 3, 1e-3)), objective(mixed_values(rng, 3)), uniform_real(rng, 0, 5));
        }
    });

    run("7 lower-expectation axioms, both balls", [](Criterion& c) {
        Rng rng(1007);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = uniform_size(rng, 1, 12);
            const Objective f = objective(mixed_values(rng, n));
            axioms(c, pmf(uniform_simplex(rng, n)), f, BallFamily::tv, uniform_real(rng, 0.0, 1.2), rng);
            axioms(c, pmf(positive_simplex(rng, n, 1e-3)), f, BallFamily::chi2, uniform_real(rng, 0.0, 5.0), rng);
        }
    });

    run("8 degenerate inputs", [](Criterion& c) {
        Rng rng(1008);
        const double third = 1.0 / 3.0;
        struct Case {
            Pmf p;
            Objective f;
        };
        std::vector<Case> cases{
            {pmf({1.0}), objective({2.5})},
            {pmf({third, third, third}), objective({5, 5, 5})},
            {pmf({0.5, 0.25, 0.25}), objective({0, 0, 1})},
            {pmf({0.2, 0.3, 0.1, 0.4}), objective({-1, -1, -1, 2})},
            {pmf({0.1, 0.6, 0.3}), objective({7, 7, -3})},
            {pmf({0.5, 0.5}), objective({0, 1})},
        };
        for (int i = 0; i < 30; ++i) {
            const std::size_t n = uniform_size(rng, 2, 10);
            cases.push_back({pmf(positive_simplex(rng, n, 1e-3)), objective(tied_values(rng, n, 2))});
        }
        for (const Case& k : cases) {
            std::vector<double> radii{0.0, 1.0, 1.5, uniform_real(rng, 0.0, 1.0)};
            for (double d : radii) {
                tv_structure(c, k.p, k.f, d);
                axioms(c, k.p, k.f, BallFamily::tv, d, rng);
                axioms(c, k.p, k.f, BallFamily::chi2, d, rng);
                chi2_consistency(c, k.p, k.f, d);
                if (k.p.size() == 2 || k.p.size() == 3) special_cases(c, k.p, k.f, d);
                c.check(lower_expectation(k.p, k.f, BallSpec(BallFamily::tv, 0.0)).value ==
                            lower_expectation(k.p, k.f, BallSpec(BallFamily::tv, 0.0)).value,
                        "determinism");
            }
            chi2_ordering(c, k.p, k.f);
            const bool constant = k.f.min() == k.f.max();
            if (constant)
                for (double d : radii) c.check(lower_expectation(k.p, k.f, BallSpec(BallFamily::chi2, d)).value == k.f[0],
                                               "constant f not returned");
        }
        // zero weights are legal under TV
        tv_structure(c, pmf({0.0, 0.5, 0.0, 0.5}), objective({3, 1, 0, 2}), 0.3);
        axioms(c, pmf({0.0, 0.5, 0.0, 0.5}), objective({3, 1, 0, 2}), BallFamily::tv, 0.3, rng);
    });

    run("9 CLI round trip", cli_round_trip);

    std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << '\n';
    return all ? 0 : 1;
}
