#pragma once

// Lower and upper expectations over chi-squared divergence balls
//   B_chi2(p, delta) = { q : sum (q(x) - p(x))^2 / p(x) <= delta },  p > 0.
//
// Sorting outcomes by ascending f, with m_k, mu_k, sigma_k^2 the mass, mean
// and variance of the first k outcomes and l the size of the bottom tie
// plateau, the critical radii
//   delta_l = +inf,  delta_k = (sigma_k^2 / (f_k - mu_k)^2 + 1 - m_k) / m_k
// are non-increasing in k. The active rank r is the largest k with
// delta_k > delta, and the optimum is mu_r - sigma_r sqrt(m_r delta - (1 - m_r))
// for r > l, or f_1 once the whole plateau is reached.

#include "credal/core.hpp"

#include <array>
#include <cassert>
#include <optional>

namespace credal {

inline double chi2_divergence(std::span<const double> q, std::span<const double> p) {
    detail::require(q.size() == p.size(), ErrorKind::LengthMismatch, "chi2_divergence operands differ in length");
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < q.size(); ++i) {
        detail::require(p[i] > 0.0, ErrorKind::ZeroMassForbidden, "reference weight must be strictly positive");
        const double d = q[i] - p[i];
        acc.add(d * d / p[i]);
    }
    return acc.value();
}

inline double chi2_divergence(const Pmf& q, const Pmf& p) { return chi2_divergence(q.weights(), p.weights()); }

/// A critical radius: either finite or unbounded (the plateau rank).
class CriticalRadius {
public:
    static CriticalRadius unbounded() noexcept { return CriticalRadius(); }
    static CriticalRadius finite(double value) noexcept { return CriticalRadius(value); }

    bool is_unbounded() const noexcept { return !value_.has_value(); }
    /// Throws std::bad_optional_access on the unbounded radius.
    double value() const { return value_.value(); }
    bool exceeds(double delta) const noexcept { return !value_ || *value_ > delta; }

private:
    CriticalRadius() = default;
    explicit CriticalRadius(double v) : value_(v) {}
    std::optional<double> value_;
};

/// Critical radii for ranks plateau()..n of a sorted problem.
class CriticalDeltas {
public:
    std::size_t plateau() const noexcept { return plateau_; }
    std::size_t size() const noexcept { return plateau_ + finite_.size(); }

    /// k in plateau()..size().
    CriticalRadius at(std::size_t k) const {
        detail::require(k >= plateau_ && k <= size(), ErrorKind::InvalidIndex,
                        "critical radius rank " + std::to_string(k) + " outside the plateau..n range");
        return k == plateau_ ? CriticalRadius::unbounded() : CriticalRadius::finite(finite_[k - plateau_ - 1]);
    }

    /// Finite radii for ranks plateau()+1..n, in rank order.
    std::span<const double> finite_values() const noexcept { return finite_; }

    friend CriticalDeltas critical_deltas(const SortedProblem& sp);

private:
    std::size_t plateau_ = 1;
    std::vector<double> finite_;
};

inline CriticalDeltas critical_deltas(const SortedProblem& sp) {
    for (double w : sp.p_sorted())
        detail::require(w > 0.0, ErrorKind::ZeroMassForbidden, "chi2 balls need every p(x) > 0");
    CriticalDeltas cd;
    cd.plateau_ = sp.plateau();
    for (std::size_t k = sp.plateau() + 1; k <= sp.size(); ++k) {
        const double gap = sp.f(k) - sp.mu(k);
        assert(gap > 0.0 && sp.var(k) > 0.0);
        cd.finite_.push_back((sp.var(k) / (gap * gap) + sp.tail(k)) / sp.m(k));
    }
#ifndef NDEBUG
    for (std::size_t i = 0; i + 1 < cd.finite_.size(); ++i)
        assert(cd.finite_[i + 1] <= cd.finite_[i] * (1.0 + 1e-9) + 1e-12);
#endif
    return cd;
}

/// The rank r in plateau..n with delta_r > delta >= delta_{r+1}.
inline std::size_t chi2_active_index(const CriticalDeltas& cd, double delta) {
    detail::require(!(delta < 0.0), ErrorKind::NegativeDelta, "radius is negative");
    std::size_t r = cd.size();
    while (!cd.at(r).exceeds(delta)) --r;
    return r;
}

namespace detail {

// m_k delta - (1 - m_k), clamped at zero when only roundoff makes it negative.
inline double chi2_radical(const SortedProblem& sp, std::size_t k, double delta) {
    const double rad = sp.m(k) * delta - sp.tail(k);
    if (rad >= 0.0) return rad;
    if (rad >= -1e-12) return 0.0;
    throw std::logic_error("chi2 radical " + std::to_string(rad) + " is negative at rank " + std::to_string(k));
}

inline void require_rank(const SortedProblem& sp, std::size_t k) {
    require(k >= sp.plateau() && k <= sp.size(), ErrorKind::InvalidIndex,
            "rank " + std::to_string(k) + " outside the plateau..n range");
}

} // namespace detail

/// Unique minimizer of E_q(f) over unit-sum q supported on ranks 1..k with
/// divergence at most delta, for k > plateau, in sorted order. Entries may be
/// negative when delta > delta_k; rank k vanishes exactly at delta = delta_k.
inline std::vector<double> chi2_candidate(const SortedProblem& sp, std::size_t k, double delta) {
    detail::require_rank(sp, k);
    detail::require(k > sp.plateau(), ErrorKind::InvalidIndex, "candidate needs a rank above the plateau");
    const double sigma = std::sqrt(sp.var(k));
    const double slope = std::sqrt(detail::chi2_radical(sp, k, delta)) / sigma;
    std::vector<double> q(sp.size(), 0.0);
    for (std::size_t i = 1; i <= k; ++i) q[i - 1] = sp.p(i) / sp.m(k) * (1.0 - (sp.f(i) - sp.mu(k)) * slope);
    return q;
}

/// Branch value for rank r: f_1 on the plateau, else mu_r - sigma_r sqrt(radical).
inline double chi2_branch_value(const SortedProblem& sp, std::size_t r, double delta) {
    detail::require_rank(sp, r);
    if (r == sp.plateau()) return sp.f(1);
    return sp.mu(r) - std::sqrt(sp.var(r)) * std::sqrt(detail::chi2_radical(sp, r, delta));
}

/// Attaining distribution in sorted order. On the plateau branch this is the
/// minimum-divergence choice p / m_l restricted to the plateau.
inline Pmf chi2_minimizer(const SortedProblem& sp, std::size_t r, double delta) {
    detail::require_rank(sp, r);
    std::vector<double> q(sp.size(), 0.0);
    if (r == sp.plateau()) {
        for (std::size_t i = 1; i <= r; ++i) q[i - 1] = sp.p(i) / sp.m(r);
    } else {
        assert(sp.var(r) > 0.0);
        q = chi2_candidate(sp, r, delta);
        for (double& w : q)
            if (w < 0.0 && w > -1e-12) w = 0.0;
    }
    return Pmf::from_weights(std::move(q));
}

inline BoundResult chi2_lower_expectation(const Pmf& p, const Objective& f, double delta) {
    const BallSpec ball(BallFamily::chi2, delta);
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch, "p and f differ in length");
    detail::require(p.strictly_positive(), ErrorKind::ZeroMassForbidden, "chi2 balls need every p(x) > 0");
    const SortedProblem sp = sort_and_prefix(p, f);
    const CriticalDeltas cd = critical_deltas(sp);
    const std::size_t r = chi2_active_index(cd, ball.delta());
    const Pmf q = chi2_minimizer(sp, r, ball.delta());
    return {chi2_branch_value(sp, r, ball.delta()), Pmf::from_weights(sp.unsort(q.weights()), p.labels()), r,
            r == sp.plateau() ? Branch::plateau : Branch::interior};
}

inline BoundResult chi2_upper_expectation(const Pmf& p, const Objective& f, double delta) {
    BoundResult res = chi2_lower_expectation(p, f.negated(), delta);
    res.value = -res.value;
    return res;
}

namespace detail {

inline void require_chi2_arity(const Pmf& p, const Objective& f, std::size_t n) {
    require(p.size() == n && f.size() == n, ErrorKind::WrongArity,
            "this closed form needs exactly " + std::to_string(n) + " outcomes");
    require(p.strictly_positive(), ErrorKind::ZeroMassForbidden, "chi2 balls need every p(x) > 0");
}

} // namespace detail

/// Two-outcome closed form, evaluated directly without prefix statistics:
///   sum p f - sqrt(delta p_1 p_2) |f_2 - f_1|   if delta < p_2 / p_1,
///   f_1                                          otherwise,
/// where outcome 1 carries the smaller f.
inline double chi2_two_point(const Pmf& p, const Objective& f, double delta) {
    detail::require_chi2_arity(p, f, 2);
    const BallSpec ball(BallFamily::chi2, delta);
    const std::size_t lo = f[1] < f[0] ? 1 : 0;
    const std::size_t hi = 1 - lo;
    if (f[lo] == f[hi] || ball.delta() >= p[hi] / p[lo]) return f[lo];
    return p[0] * f[0] + p[1] * f[1] - std::sqrt(ball.delta() * p[0] * p[1]) * std::abs(f[hi] - f[lo]);
}

/// Three-outcome case distinction with moments taken straight from their
/// definitions. A tie at the bottom of the order falls back to the general path.
inline double chi2_three_point(const Pmf& p, const Objective& f, double delta) {
    detail::require_chi2_arity(p, f, 3);
    const BallSpec ball(BallFamily::chi2, delta);
    std::array<std::size_t, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const double p1 = p[idx[0]], p2 = p[idx[1]], p3 = p[idx[2]];
    const double f1 = f[idx[0]], f2 = f[idx[1]], f3 = f[idx[2]];
    if (f1 == f2) return chi2_lower_expectation(p, f, delta).value;

    const double m2 = p1 + p2;
    const double mu2 = (p1 * f1 + p2 * f2) / m2;
    const double var2 = (p1 * (f1 - mu2) * (f1 - mu2) + p2 * (f2 - mu2) * (f2 - mu2)) / m2;
    const double mu3 = p1 * f1 + p2 * f2 + p3 * f3;
    const double var3 = p1 * (f1 - mu3) * (f1 - mu3) + p2 * (f2 - mu3) * (f2 - mu3) + p3 * (f3 - mu3) * (f3 - mu3);
    const double delta2 = (var2 / ((f2 - mu2) * (f2 - mu2)) + p3) / m2;
    const double delta3 = var3 / ((f3 - mu3) * (f3 - mu3));
    const double d = ball.delta();
    if (d < delta3) return mu3 - std::sqrt(var3) * std::sqrt(d);
    if (d < delta2) return mu2 - std::sqrt(var2) * std::sqrt(std::max(m2 * d - p3, 0.0));
    return f1;
}

} // namespace credal
