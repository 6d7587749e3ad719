#include "volimpact/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace volimpact {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kSqrt2Pi = 2.5066282746310005024;

void check_inputs(const OptionSpec& spec, double forward, double time_to_expiry, double vol,
                  double discount) {
    if (!(forward > 0.0)) throw DomainError("forward must be positive, got " + std::to_string(forward));
    if (!(spec.strike > 0.0))
        throw DomainError("strike must be positive, got " + std::to_string(spec.strike));
    if (!(time_to_expiry > 0.0))
        throw DomainError("time_to_expiry must be positive, got " + std::to_string(time_to_expiry));
    if (!(vol >= 0.0)) throw DomainError("vol must be nonnegative, got " + std::to_string(vol));
    if (!(discount > 0.0) || discount > 1.0)
        throw DomainError("discount must be in (0, 1], got " + std::to_string(discount));
}

double intrinsic(const OptionSpec& spec, double forward, double discount) {
    const double payoff = spec.kind == OptionKind::Call ? forward - spec.strike : spec.strike - forward;
    return discount * std::max(payoff, 0.0);
}

} // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double price(const OptionSpec& spec, const PricingInputs& in) {
    check_inputs(spec, in.forward, in.time_to_expiry, in.vol, in.discount);
    if (in.vol == 0.0) return intrinsic(spec, in.forward, in.discount);
    const double stddev = in.vol * std::sqrt(in.time_to_expiry);
    const double d1 = std::log(in.forward / spec.strike) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    if (spec.kind == OptionKind::Call)
        return in.discount * (in.forward * norm_cdf(d1) - spec.strike * norm_cdf(d2));
    return in.discount * (spec.strike * norm_cdf(-d2) - in.forward * norm_cdf(-d1));
}

double vega(const OptionSpec& spec, const PricingInputs& in) {
    check_inputs(spec, in.forward, in.time_to_expiry, in.vol, in.discount);
    const double sqrt_t = std::sqrt(in.time_to_expiry);
    if (in.vol == 0.0) {
        // vol -> 0 limit: discount * F * phi(0) * sqrt(t) at the money, zero elsewhere
        return in.forward == spec.strike ? in.discount * in.forward * sqrt_t / kSqrt2Pi : 0.0;
    }
    const double stddev = in.vol * sqrt_t;
    const double d1 = std::log(in.forward / spec.strike) / stddev + 0.5 * stddev;
    return in.discount * in.forward * norm_pdf(d1) * sqrt_t;
}

double implied_vol(const OptionSpec& spec, double observed_price, double forward,
                   double time_to_expiry, double discount) {
    check_inputs(spec, forward, time_to_expiry, 0.0, discount);
    const double lower = intrinsic(spec, forward, discount);
    const double upper = discount * (spec.kind == OptionKind::Call ? forward : spec.strike);
    if (observed_price < lower)
        throw ArbitrageError("price " + std::to_string(observed_price) + " below intrinsic value " +
                             std::to_string(lower));
    if (observed_price >= upper)
        throw ArbitrageError("price " + std::to_string(observed_price) +
                             " at or above the upper bound " + std::to_string(upper));
    const double tol = 1e-10 * forward;
    if (observed_price - lower <= tol && lower > 0.0) return 0.0;

    PricingInputs in{forward, time_to_expiry, 0.0, discount};
    double lo = 0.0;
    double hi = 1.0;
    in.vol = hi;
    double f_hi = price(spec, in) - observed_price;
    while (f_hi < 0.0 && hi < 1e4) {
        lo = hi;
        hi *= 2.0;
        in.vol = hi;
        f_hi = price(spec, in) - observed_price;
    }
    if (f_hi < 0.0) throw ConvergenceError("implied vol bracket expansion failed");

    // Brenner-Subrahmanyam style seed, clamped into the bracket.
    double sigma = std::clamp(kSqrt2Pi * observed_price / (discount * forward) /
                                  std::sqrt(time_to_expiry),
                              lo + 1e-12, hi);
    for (int iter = 0; iter < 100; ++iter) {
        in.vol = sigma;
        const double diff = price(spec, in) - observed_price;
        if (std::abs(diff) <= tol) return sigma;
        if (diff > 0.0)
            hi = sigma;
        else
            lo = sigma;
        const double v = vega(spec, in);
        double next = v > 0.0 ? sigma - diff / v : sigma;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi); // fall back to bisection
        sigma = next;
    }
    throw ConvergenceError("implied vol did not converge within 100 iterations");
}

} // namespace volimpact
