#pragma once

// Lower and upper expectations over total-variation balls
//   B_TV(p, delta) = { q : (1/2) sum |q(x) - p(x)| <= delta }.
//
// With outcomes sorted by ascending f, the optimum moves delta mass onto the
// f-smallest outcome, draining it from the top of the order. r is the
// smallest rank whose strict tail mass is at most delta; ranks above r are
// emptied, rank r is drained partially, ranks 2..r-1 are kept.

#include "credal/core.hpp"

namespace credal {

inline double tv_distance(std::span<const double> q, std::span<const double> p) {
    detail::require(q.size() == p.size(), ErrorKind::LengthMismatch, "tv_distance operands differ in length");
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < q.size(); ++i) acc.add(std::abs(q[i] - p[i]));
    return 0.5 * acc.value();
}

inline double tv_distance(const Pmf& q, const Pmf& p) { return tv_distance(q.weights(), p.weights()); }

/// Smallest rank r in 1..n with delta >= tail(r). Always exists since tail(n) = 0.
inline std::size_t tv_threshold_index(const SortedProblem& sp, double delta) {
    std::size_t r = sp.size();
    while (r > 1 && delta >= sp.tail(r - 1)) --r;
    return r;
}

namespace detail {

inline BoundResult tv_solve_sorted(const Pmf& p, const SortedProblem& sp, double delta) {
    const std::size_t n = sp.size();
    const std::size_t r = tv_threshold_index(sp, delta);
    std::vector<double> q(n, 0.0);
    if (r == 1) {
        q[0] = 1.0;
        return {sp.f(1), Pmf::from_weights(sp.unsort(q), p.labels()), 1, Branch::degenerate};
    }
    q[0] = sp.p(1) + delta;
    for (std::size_t k = 2; k < r; ++k) q[k - 1] = sp.p(k);
    q[r - 1] = sp.tail(r - 1) - delta;
    const double value = expectation(q, sp.f_sorted());
    return {value, Pmf::from_weights(sp.unsort(q), p.labels()), r, Branch::interior};
}

} // namespace detail

/// Minimum of E_q(f) over the TV ball. Radii above 1 are clamped to 1, where
/// the ball is the whole simplex.
inline BoundResult tv_lower_expectation(const Pmf& p, const Objective& f, double delta) {
    const BallSpec ball(BallFamily::tv, delta);
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch, "p and f differ in length");
    const SortedProblem sp = sort_and_prefix(p, f);
    return detail::tv_solve_sorted(p, sp, std::min(ball.delta(), 1.0));
}

/// Maximum of E_q(f) over the TV ball; the returned distribution attains it.
inline BoundResult tv_upper_expectation(const Pmf& p, const Objective& f, double delta) {
    BoundResult res = tv_lower_expectation(p, f.negated(), delta);
    res.value = -res.value;
    return res;
}

} // namespace credal
