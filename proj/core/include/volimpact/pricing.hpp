#pragma once

#include "volimpact/types.hpp"

namespace volimpact {

/// Forward-measure pricing context. No separate spot/rate/dividend inputs:
/// everything is expressed through the forward and a single discount factor.
struct PricingInputs {
    double forward = 0.0;        // > 0
    double time_to_expiry = 0.0; // years, > 0
    double vol = 0.0;            // annualized, >= 0 (0 = intrinsic value)
    double discount = 1.0;       // in (0, 1]
};

/// Standard normal CDF/PDF, exposed for reuse by oracles and tests.
double norm_cdf(double x);
double norm_pdf(double x);

/// Discounted expected payoff under lognormal forward dynamics.
/// vol == 0 returns the discounted intrinsic value exactly.
/// Throws DomainError on invalid inputs.
double price(const OptionSpec& spec, const PricingInputs& in);

/// d price / d vol. Identical for calls and puts, nonnegative.
double vega(const OptionSpec& spec, const PricingInputs& in);

/// Inverts `price` in the vol argument with a bisection-safeguarded Newton
/// iteration. Tolerance 1e-10 * forward on the reproduced price, 100
/// iterations maximum.
/// Throws ArbitrageError when observed_price is outside
/// [intrinsic, discount*F] (call) or [intrinsic, discount*K] (put),
/// ConvergenceError if the iteration cap is reached.
double implied_vol(const OptionSpec& spec, double observed_price, double forward,
                   double time_to_expiry, double discount = 1.0);

} // namespace volimpact
