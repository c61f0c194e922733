#include "qsba/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qsba {

void validate(const BinomialModel& model) {
    if (model.l < 1) {
        throw std::invalid_argument("binomial model needs l >= 1");
    }
    if (!(model.p > 0.0 && model.p < 1.0)) {
        throw std::invalid_argument("binomial model needs 0 < p < 1");
    }
}

namespace {

double log_pmf_zero(const BinomialModel& m) { return m.l * std::log1p(-m.p); }

} // namespace

double binom_pmf(const BinomialModel& model, int k) {
    validate(model);
    if (k < 0 || k > model.l) {
        return 0.0;
    }
    const double log_odds = std::log(model.p) - std::log1p(-model.p);
    double log_term = log_pmf_zero(model);
    for (int z = 0; z < k; ++z) {
        log_term += std::log(static_cast<double>(model.l - z) / (z + 1)) + log_odds;
    }
    return std::exp(log_term);
}

double binom_cdf(const BinomialModel& model, int k) {
    validate(model);
    if (k < 0 || k > model.l) {
        throw std::invalid_argument("binom_cdf: k must lie in [0, l]");
    }
    const double log_odds = std::log(model.p) - std::log1p(-model.p);
    double log_term = log_pmf_zero(model);
    double sum = std::exp(log_term);
    for (int z = 0; z < k; ++z) {
        log_term += std::log(static_cast<double>(model.l - z) / (z + 1)) + log_odds;
        sum += std::exp(log_term);
    }
    return std::min(sum, 1.0);
}

double binom_sf(const BinomialModel& model, int k) {
    validate(model);
    if (k < 0 || k > model.l + 1) {
        throw std::invalid_argument("binom_sf: k must lie in [0, l + 1]");
    }
    if (k == 0) {
        return 1.0;
    }
    // Sum the upper tail directly so small tails keep their relative precision.
    const double log_odds = std::log(model.p) - std::log1p(-model.p);
    double log_term = log_pmf_zero(model);
    double sum = 0.0;
    for (int z = 0; z <= model.l; ++z) {
        if (z > 0) {
            log_term += std::log(static_cast<double>(model.l - z + 1) / z) + log_odds;
        }
        if (z >= k) {
            sum += std::exp(log_term);
        }
    }
    return std::min(sum, 1.0);
}

double relative_entropy(double x, double y) {
    if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) {
        throw std::invalid_argument("relative_entropy: arguments must lie in (0, 1)");
    }
    return x * std::log(x / y) + (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
}

BoundReport success_bounds(const BinomialModel& model) {
    validate(model);
    const int k = model.l / 2;
    BoundReport r;
    r.l = model.l;
    r.exact_success = 1.0 - binom_cdf(model, k);
    const double x = static_cast<double>(k) / model.l;
    r.valid = k >= 1 && x < model.p;
    if (!r.valid) {
        r.lower_bound = std::numeric_limits<double>::quiet_NaN();
        r.upper_bound = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double tail = std::exp(-model.l * relative_entropy(x, model.p));
    r.lower_bound = 1.0 - tail;
    r.upper_bound = 1.0 - tail / std::sqrt(8.0 * model.l * x * (1.0 - x));
    return r;
}

double ClosedForms::all_inconclusive(int l) const { return std::pow(p_inconclusive, l); }

double ClosedForms::projective_whole_bid(int m) const { return std::pow(p_success, m); }

double ClosedForms::majority_success(int l) const {
    return 1.0 - binom_cdf(BinomialModel{l, p_success}, l / 2);
}

double ClosedForms::majority_whole_bid(int l, int m) const { return std::pow(majority_success(l), m); }

double ClosedForms::usd_whole_bid(int l, int m) const { return std::pow(1.0 - all_inconclusive(l), m); }

const ClosedForms& closed_forms() {
    static const ClosedForms forms{
        0.5 * (1.0 + std::sin(std::numbers::pi / 4.0)),
        0.5 * (1.0 - std::sin(std::numbers::pi / 4.0)),
        std::cos(std::numbers::pi / 4.0),
    };
    return forms;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval needs at least one trial");
    }
    if (successes > trials) {
        throw std::invalid_argument("successes exceed trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) {
        ci.low = 0.0;
    }
    if (successes == trials) {
        ci.high = 1.0;
    }
    ci.low = std::min(ci.low, p);
    ci.high = std::max(ci.high, p);
    return ci;
}

bool Metric::consistent() const {
    if (tolerance) {
        return std::abs(estimate - exact) <= *tolerance;
    }
    return ci.contains(exact);
}

Metric Metric::proportion(std::string name, std::uint64_t successes, std::uint64_t trials, double exact, double z) {
    Metric m;
    m.name = std::move(name);
    m.successes = successes;
    m.trials = trials;
    m.exact = exact;
    if (trials > 0) {
        m.estimate = static_cast<double>(successes) / static_cast<double>(trials);
        m.ci = wilson_interval(successes, trials, z);
    } else {
        m.estimate = std::numeric_limits<double>::quiet_NaN();
        m.ci = Interval{0.0, 1.0};
    }
    return m;
}

Metric Metric::value(std::string name, double estimate, double exact, double tolerance) {
    Metric m;
    m.name = std::move(name);
    m.estimate = estimate;
    m.exact = exact;
    m.tolerance = tolerance;
    m.ci = Interval{estimate - tolerance, estimate + tolerance};
    return m;
}

} // namespace qsba
