#pragma once

// Robustness radius: the smallest ball radius at which the lower expectation
// drops to a threshold. The bound is continuous and non-increasing in the
// radius, so bisection on the radius converges to it.

#include "credal/bounds.hpp"

namespace credal {

inline constexpr double radius_tolerance = 1e-10;

/// Smallest delta >= 0 with lower expectation <= theta. Returns 0 when
/// theta >= E_p(f); throws Unreachable when theta < min f.
inline double robustness_radius(const Pmf& p, const Objective& f, BallFamily family, double theta) {
    detail::require(std::isfinite(theta), ErrorKind::NonFinite, "threshold is not finite");
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch, "p and f differ in length");
    if (family == BallFamily::chi2)
        detail::require(p.strictly_positive(), ErrorKind::ZeroMassForbidden, "chi2 balls need every p(x) > 0");
    if (theta >= expectation(p, f)) return 0.0;
    detail::require(theta >= f.min(), ErrorKind::Unreachable,
                    "threshold " + std::to_string(theta) + " is below min f = " + std::to_string(f.min()));

    const auto below = [&](double delta) { return lower_expectation(p, f, BallSpec(family, delta)).value <= theta; };

    double lo = 0.0;
    double hi = 1.0;
    if (family == BallFamily::chi2) {
        // The plateau value min f is reached at a finite radius, so doubling ends.
        while (!below(hi)) {
            lo = hi;
            hi *= 2.0;
            detail::require(std::isfinite(hi), ErrorKind::Unreachable, "radius search diverged");
        }
    }
    while (hi - lo > radius_tolerance) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        (below(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace credal
