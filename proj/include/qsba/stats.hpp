#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qsba {

/// B(l, p) with l >= 1 and 0 < p < 1.
struct BinomialModel {
    int l = 1;
    double p = 0.5;
};

/// Throws std::invalid_argument when the model violates its invariants.
void validate(const BinomialModel& model);

double binom_pmf(const BinomialModel& model, int k);
/// P(X <= k), summed term by term with log-domain term ratios (no factorials).
/// Throws std::invalid_argument unless 0 <= k <= l.
double binom_cdf(const BinomialModel& model, int k);
/// P(X >= k) for 0 <= k <= l + 1.
double binom_sf(const BinomialModel& model, int k);

/// D(x||y) in nats. Throws std::invalid_argument unless x, y lie in (0, 1).
double relative_entropy(double x, double y);

/// Majority-vote success with its Chernoff-type sandwich, k = floor(l/2):
///
///   1 - exp(-l D(k/l || p)) <= 1 - P(X <= k) <= 1 - exp(-l D(k/l || p)) / sqrt(8 l (k/l)(1 - k/l))
///
/// The bounds only apply when 0 < k/l < p; outside that regime `valid` is
/// false and the bound fields hold NaN.
struct BoundReport {
    int l = 0;
    double exact_success = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    bool valid = false;

    bool sandwich_holds() const { return valid && lower_bound <= exact_success && exact_success <= upper_bound; }
};

BoundReport success_bounds(const BinomialModel& model);

/// Error probability used for the exact column:
inline constexpr std::string_view kMajorityErrorFormula =
    "P(e) = sum_{z=0}^{floor(l/2)} C(l,z) p_s^z p_e^(l-z)";

/// Figures of merit for discriminating |0> from |+>.
struct ClosedForms {
    /// (1 + sin(pi/4)) / 2, tau-basis success per qubit.
    double p_success;
    /// (1 - sin(pi/4)) / 2.
    double p_error;
    /// cos(pi/4), optimal unambiguous-discrimination failure per qubit.
    double p_inconclusive;

    double all_inconclusive(int l) const;            // p_in^l
    double projective_whole_bid(int m) const;        // p_s^m
    double majority_success(int l) const;            // 1 - P(X <= floor(l/2)), X ~ B(l, p_s)
    double majority_whole_bid(int l, int m) const;   // majority_success(l)^m
    double usd_whole_bid(int l, int m) const;        // (1 - p_in^l)^m
};

const ClosedForms& closed_forms();

struct Interval {
    double low = 0.0;
    double high = 0.0;

    bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion; requires trials >= 1.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// One reported figure: a Monte Carlo estimate next to its exact prediction.
///
/// A proportion is consistent when the exact value lies inside its Wilson
/// interval; a metric with an absolute tolerance is consistent when
/// |estimate - exact| <= tolerance.
struct Metric {
    std::string name;
    double estimate = 0.0;
    Interval ci{};
    double exact = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    std::optional<double> tolerance;

    bool consistent() const;

    static Metric proportion(std::string name, std::uint64_t successes, std::uint64_t trials, double exact,
                             double z);
    static Metric value(std::string name, double estimate, double exact, double tolerance);
};

} // namespace qsba
