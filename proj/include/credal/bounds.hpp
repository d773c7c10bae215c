#pragma once

// Family dispatch for the lower/upper expectation solvers.

#include "credal/chi2_ball.hpp"
#include "credal/tv_ball.hpp"

namespace credal {

inline BoundResult lower_expectation(const Pmf& p, const Objective& f, const BallSpec& ball) {
    return ball.family() == BallFamily::tv ? tv_lower_expectation(p, f, ball.delta())
                                           : chi2_lower_expectation(p, f, ball.delta());
}

inline BoundResult upper_expectation(const Pmf& p, const Objective& f, const BallSpec& ball) {
    return ball.family() == BallFamily::tv ? tv_upper_expectation(p, f, ball.delta())
                                           : chi2_upper_expectation(p, f, ball.delta());
}

} // namespace credal
