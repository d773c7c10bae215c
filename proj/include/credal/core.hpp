#pragma once

// Domain types shared by the divergence-ball solvers: validated probability
// mass functions, objectives, ball specifications, bound results, and the
// f-sorted prefix statistics both closed forms are built on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace credal {

enum class ErrorKind {
    LengthMismatch,
    EmptySupport,
    NegativeWeight,
    SumNotOne,
    NonFinite,
    ZeroMassForbidden,
    NegativeDelta,
    InvalidLabels,
    InvalidIndex,
    WrongArity,
    TooLarge,
    EmptyFeasible,
    Unreachable,
    InvalidProblem,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::SumNotOne: return "SumNotOne";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ZeroMassForbidden: return "ZeroMassForbidden";
    case ErrorKind::NegativeDelta: return "NegativeDelta";
    case ErrorKind::InvalidLabels: return "InvalidLabels";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptyFeasible: return "EmptyFeasible";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    }
    return "Unknown";
}

/// Input or contract violation. what() is a one-line diagnostic prefixed by
/// the error kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline constexpr double sum_tolerance = 1e-9;

enum class BallFamily { tv, chi2 };

inline std::string_view to_string(BallFamily family) noexcept {
    return family == BallFamily::tv ? "tv" : "chi2";
}

namespace detail {

inline void require(bool ok, ErrorKind kind, const std::string& detail) {
    if (!ok) throw Error(kind, detail);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

} // namespace detail

/// Probability mass function over n >= 1 outcomes. Construction validates
/// and renormalizes by the (tolerance-checked) sum.
class Pmf {
public:
    static Pmf from_weights(std::vector<double> weights, std::vector<std::string> labels = {}) {
        detail::require(!weights.empty(), ErrorKind::EmptySupport, "probability vector is empty");
        for (double w : weights)
            detail::require(std::isfinite(w), ErrorKind::NonFinite, "probability weight is not finite");
        for (std::size_t i = 0; i < weights.size(); ++i)
            detail::require(weights[i] >= 0.0, ErrorKind::NegativeWeight,
                            "weight " + std::to_string(i) + " is negative (" +
                                std::to_string(weights[i]) + ")");
        const double total = detail::compensated_sum(weights);
        detail::require(std::abs(total - 1.0) <= sum_tolerance, ErrorKind::SumNotOne,
                        "weights sum to " + std::to_string(total) + ", expected 1 within 1e-9");
        if (total != 1.0)
            for (double& w : weights) w /= total;
        check_labels(labels, weights.size());
        return Pmf(std::move(weights), std::move(labels));
    }

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const noexcept { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    bool strictly_positive() const noexcept {
        return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
    }

private:
    Pmf(std::vector<double> weights, std::vector<std::string> labels)
        : weights_(std::move(weights)), labels_(std::move(labels)) {}

    static void check_labels(const std::vector<std::string>& labels, std::size_t n) {
        if (labels.empty()) return;
        detail::require(labels.size() == n, ErrorKind::LengthMismatch,
                        "label count " + std::to_string(labels.size()) + " differs from outcome count " +
                            std::to_string(n));
        std::unordered_set<std::string> seen(labels.begin(), labels.end());
        detail::require(seen.size() == labels.size(), ErrorKind::InvalidLabels, "labels are not distinct");
    }

    std::vector<double> weights_;
    std::vector<std::string> labels_;
};

/// Real-valued payoff on the outcomes; all values finite.
class Objective {
public:
    static Objective from_values(std::vector<double> values) {
        detail::require(!values.empty(), ErrorKind::EmptySupport, "objective vector is empty");
        for (double v : values)
            detail::require(std::isfinite(v), ErrorKind::NonFinite, "objective value is not finite");
        return Objective(std::move(values));
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    double min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
    double max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

    Objective negated() const {
        std::vector<double> out(values_.size());
        std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return -v; });
        return Objective(std::move(out));
    }

private:
    explicit Objective(std::vector<double> values) : values_(std::move(values)) {}
    std::vector<double> values_;
};

class BallSpec {
public:
    BallSpec(BallFamily family, double delta) : family_(family), delta_(delta) {
        detail::require(!std::isnan(delta), ErrorKind::NonFinite, "radius is NaN");
        detail::require(delta >= 0.0, ErrorKind::NegativeDelta,
                        "radius " + std::to_string(delta) + " is negative");
    }

    BallFamily family() const noexcept { return family_; }
    double delta() const noexcept { return delta_; }

private:
    BallFamily family_;
    double delta_;
};

enum class Branch { interior, plateau, degenerate };

inline std::string_view to_string(Branch branch) noexcept {
    switch (branch) {
    case Branch::interior: return "interior";
    case Branch::plateau: return "plateau";
    case Branch::degenerate: return "degenerate";
    }
    return "unknown";
}

/// Optimal value of a ball bound together with a distribution attaining it.
/// `active_index` is the 1-based rank (in f-ascending order) of the last
/// outcome in the optimizer's support pattern.
struct BoundResult {
    double value;
    Pmf minimizer;
    std::size_t active_index;
    Branch branch;
};

/// Checks raw inputs for one of the ball families and returns the validated
/// pair. Under chi2 every weight must be strictly positive.
inline std::pair<Pmf, Objective> validate(std::vector<double> p, std::vector<double> f, BallFamily family,
                                          std::vector<std::string> labels = {}) {
    detail::require(!p.empty() || !f.empty(), ErrorKind::EmptySupport, "no outcomes");
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch,
                    "p has " + std::to_string(p.size()) + " entries but f has " + std::to_string(f.size()));
    for (double v : f)
        detail::require(std::isfinite(v), ErrorKind::NonFinite, "objective value is not finite");
    Pmf pmf = Pmf::from_weights(std::move(p), std::move(labels));
    if (family == BallFamily::chi2)
        detail::require(pmf.strictly_positive(), ErrorKind::ZeroMassForbidden,
                        "chi2 balls need every p(x) > 0");
    return {std::move(pmf), Objective::from_values(std::move(f))};
}

inline double expectation(std::span<const double> p, std::span<const double> f) {
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch, "expectation operands differ in length");
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < p.size(); ++i) acc.add(p[i] * f[i]);
    return acc.value();
}

inline double expectation(const Pmf& p, const Objective& f) { return expectation(p.weights(), f.values()); }

/// (p, f) sorted by ascending f, ties kept in original order, with prefix
/// statistics. Rank arguments k are 1-based, as in m(k) = p(x_1)+...+p(x_k).
class SortedProblem {
public:
    std::size_t size() const noexcept { return perm_.size(); }
    std::span<const std::size_t> perm() const noexcept { return perm_; }
    std::span<const double> p_sorted() const noexcept { return p_; }
    std::span<const double> f_sorted() const noexcept { return f_; }
    std::span<const double> prefix_mass() const noexcept { return mass_; }
    std::span<const double> prefix_mean() const noexcept { return mean_; }
    std::span<const double> prefix_var() const noexcept { return var_; }

    double p(std::size_t k) const noexcept { return p_[k - 1]; }
    double f(std::size_t k) const noexcept { return f_[k - 1]; }
    double m(std::size_t k) const noexcept { return mass_[k - 1]; }
    double mu(std::size_t k) const noexcept { return mean_[k - 1]; }
    double var(std::size_t k) const noexcept { return var_[k - 1]; }
    /// Mass strictly after rank k, k = 0..n; accumulated from the top so
    /// that 1 - m(k) is never formed by cancellation.
    double tail(std::size_t k) const noexcept { return tail_[k]; }
    /// Number of outcomes tied with the smallest f value.
    std::size_t plateau() const noexcept { return plateau_; }

    /// Maps a vector in sorted order back to the original outcome order.
    std::vector<double> unsort(std::span<const double> sorted) const {
        std::vector<double> out(sorted.size());
        for (std::size_t k = 0; k < sorted.size(); ++k) out[perm_[k]] = sorted[k];
        return out;
    }

    friend SortedProblem sort_and_prefix(const Pmf& p, const Objective& f);

private:
    std::vector<std::size_t> perm_;
    std::vector<double> p_, f_, mass_, mean_, var_, tail_;
    std::size_t plateau_ = 1;
};

inline SortedProblem sort_and_prefix(const Pmf& p, const Objective& f) {
    detail::require(p.size() == f.size(), ErrorKind::LengthMismatch, "p and f differ in length");
    const std::size_t n = p.size();
    SortedProblem sp;
    sp.perm_.resize(n);
    std::iota(sp.perm_.begin(), sp.perm_.end(), std::size_t{0});
    std::stable_sort(sp.perm_.begin(), sp.perm_.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });

    sp.p_.resize(n);
    sp.f_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        sp.p_[k] = p[sp.perm_[k]];
        sp.f_[k] = f[sp.perm_[k]];
    }

    // Weighted Welford (West) update: mean and sum of squared deviations
    // advance together, so the variance never comes from E[f^2] - mean^2.
    sp.mass_.resize(n);
    sp.mean_.resize(n);
    sp.var_.resize(n);
    detail::CompensatedSum mass;
    double mean = sp.f_[0];
    double sq_dev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = sp.p_[k];
        mass.add(w);
        const double m = mass.value();
        if (w > 0.0) {
            const double step = sp.f_[k] - mean;
            mean += (w / m) * step;
            sq_dev += w * step * (sp.f_[k] - mean);
        }
        sp.mass_[k] = m;
        sp.mean_[k] = mean;
        sp.var_[k] = m > 0.0 ? std::max(sq_dev / m, 0.0) : 0.0;
    }

    sp.tail_.assign(n + 1, 0.0);
    detail::CompensatedSum tail;
    for (std::size_t k = n; k-- > 0;) {
        tail.add(sp.p_[k]);
        sp.tail_[k] = tail.value();
    }

    sp.plateau_ = 1;
    while (sp.plateau_ < n && sp.f_[sp.plateau_] == sp.f_[0]) ++sp.plateau_;
    return sp;
}

} // namespace credal
