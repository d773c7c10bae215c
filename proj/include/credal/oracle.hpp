#pragma once

// Brute-force reference for the ball bounds: enumerate every distribution on
// the simplex grid with denominator `resolution`, keep those inside the ball,
// and take the smallest expectation.
//
// Grid points are feasible, so the grid minimum never undercuts the true
// minimum. Every simplex point lies within n/resolution in 1-norm of a grid
// point and E_q(f) is (max f - min f)-Lipschitz in that norm, which bounds
// the gap from above. Ball membership is decided with the plain definitional
// loops below, kept separate from the solver code on purpose.

#include "credal/core.hpp"

#include <cstdint>
#include <limits>

namespace credal::oracle {

inline constexpr std::size_t max_outcomes = 4;
inline constexpr std::uint64_t max_points = 10'000'000;

inline double naive_tv_distance(std::span<const double> q, std::span<const double> p) {
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) total += q[i] > p[i] ? q[i] - p[i] : p[i] - q[i];
    return total / 2.0;
}

inline double naive_chi2_divergence(std::span<const double> q, std::span<const double> p) {
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) total += (q[i] - p[i]) * (q[i] - p[i]) / p[i];
    return total;
}

inline double naive_distance(std::span<const double> q, std::span<const double> p, BallFamily family) {
    return family == BallFamily::tv ? naive_tv_distance(q, p) : naive_chi2_divergence(q, p);
}

inline double naive_expectation(std::span<const double> q, std::span<const double> f) {
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) total += q[i] * f[i];
    return total;
}

/// C(resolution + n - 1, n - 1), saturating at uint64 max.
inline std::uint64_t composition_count(std::size_t n, std::size_t resolution) {
    if (n == 0) return 0;
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i < n; ++i) {
        const std::uint64_t num = resolution + i;
        if (c > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
        c = c * num / i;
    }
    return c;
}

/// Lexicographic walk over the compositions of `resolution` into n parts,
/// starting at (0, ..., 0, resolution) and ending at (resolution, 0, ..., 0).
class SimplexGrid {
public:
    SimplexGrid(std::size_t n, std::size_t resolution) : resolution_(resolution), counts_(n, 0) {
        detail::require(n >= 1 && resolution >= 1, ErrorKind::InvalidProblem,
                        "grid needs at least one outcome and resolution >= 1");
        detail::require(n <= max_outcomes, ErrorKind::TooLarge,
                        "grid enumeration is limited to " + std::to_string(max_outcomes) + " outcomes");
        detail::require(composition_count(n, resolution) <= max_points, ErrorKind::TooLarge,
                        "grid would have more than 1e7 points");
        counts_.back() = resolution;
        weights_.resize(n);
        refresh();
    }

    std::size_t resolution() const noexcept { return resolution_; }
    std::span<const std::size_t> counts() const noexcept { return counts_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Advances to the next composition; false once the last one was visited.
    bool next() {
        const std::size_t n = counts_.size();
        std::size_t rest = 0;
        std::size_t j = n - 1;
        while (j > 0) {
            --j;
            rest += counts_[j + 1];
            if (rest > 0) break;
        }
        if (rest == 0) return false;
        ++counts_[j];
        for (std::size_t k = j + 1; k < n; ++k) counts_[k] = 0;
        counts_[n - 1] = rest - 1;
        refresh();
        return true;
    }

private:
    void refresh() {
        for (std::size_t i = 0; i < counts_.size(); ++i)
            weights_[i] = static_cast<double>(counts_[i]) / static_cast<double>(resolution_);
    }

    std::size_t resolution_;
    std::vector<std::size_t> counts_;
    std::vector<double> weights_;
};

inline SimplexGrid enumerate_compositions(std::size_t n, std::size_t resolution) { return {n, resolution}; }

/// 200 up to three outcomes, 100 for four.
inline std::size_t default_resolution(std::size_t n) noexcept { return n <= 3 ? 200 : 100; }

inline double tolerance(const Objective& f, std::size_t resolution) {
    return (f.max() - f.min()) * static_cast<double>(f.size()) / static_cast<double>(resolution);
}

struct OracleReport {
    double grid_minimum;
    Pmf grid_argmin;
    std::size_t resolution;
    std::uint64_t feasible_count;
    double tolerance;
};

/// Minimum of E_q(f) over grid points q inside the ball. resolution = 0
/// selects default_resolution(n). Throws EmptyFeasible if no grid point is
/// inside the ball.
inline OracleReport lower_expectation(const Pmf& p, const Objective& f, const BallSpec& ball,
                                      std::size_t resolution = 0) {
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch, "p and f differ in length");
    if (ball.family() == BallFamily::chi2)
        detail::require(p.strictly_positive(), ErrorKind::ZeroMassForbidden, "chi2 balls need every p(x) > 0");
    if (resolution == 0) resolution = default_resolution(p.size());

    SimplexGrid grid(p.size(), resolution);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> argmin;
    std::uint64_t feasible = 0;
    do {
        if (naive_distance(grid.weights(), p.weights(), ball.family()) > ball.delta()) continue;
        ++feasible;
        const double value = naive_expectation(grid.weights(), f.values());
        if (value < best) {
            best = value;
            argmin.assign(grid.weights().begin(), grid.weights().end());
        }
    } while (grid.next());

    detail::require(feasible > 0, ErrorKind::EmptyFeasible,
                    "no grid point of resolution " + std::to_string(resolution) + " lies inside the ball");
    return {best, Pmf::from_weights(std::move(argmin), p.labels()), resolution, feasible,
            tolerance(f, resolution)};
}

struct MinimizerCheck {
    double distance;
    double expectation;
    bool feasible;
    bool reproduces_value;

    bool ok() const noexcept { return feasible && reproduces_value; }
};

/// Re-evaluates a solver's attaining distribution with the naive distance
/// and expectation: inside the ball up to 1e-9 and reproducing `value` up to 1e-9.
inline MinimizerCheck check_minimizer(const Pmf& p, const Objective& f, const BallSpec& ball, const Pmf& minimizer,
                                      double value) {
    const double dist = naive_distance(minimizer.weights(), p.weights(), ball.family());
    const double e = naive_expectation(minimizer.weights(), f.values());
    return {dist, e, dist <= ball.delta() + 1e-9, std::abs(e - value) <= 1e-9};
}

} // namespace credal::oracle
