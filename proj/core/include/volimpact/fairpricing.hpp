#pragma once

#include "volimpact/impact.hpp"
#include "volimpact/metaorder.hpp"
#include "volimpact/volsurface.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace volimpact {

/// One fair-pricing comparison: x is the average execution level relative to
/// the start, y the post-relaxation level relative to the start.
struct FairPricingPoint {
    std::string metaorder_id;
    double x = 0.0;
    double y = 0.0;
};

/// Sensitivity-weighted average of the parameter over the fill times.
/// Throws UndefinedError when the metaorder's total sensitivity is zero.
double swap_param(const Metaorder& m, const ParamSeries& series);

struct FairPricingOptions {
    std::size_t n_buckets = 50;
    TradingCalendar calendar;
    double discount = 1.0;
};

struct FairPricingResult {
    std::vector<FairPricingPoint> points;
    double slope_bucketed = 0.0; // least squares through the origin on buckets
    double slope_raw = 0.0;      // same on raw points
    std::vector<BucketStat> buckets;
    std::size_t n_excluded = 0; // relaxation window crossed the session end
    /// Sell metaorders contribute with x and y negated in the portfolio
    /// variant; recorded here so downstream readers know the convention.
    std::string sign_convention = "sell metaorders reported with x and y negated";
};

/// Parameter-domain fair pricing: x = swap level - start, y = level at
/// t0 + 2T - start, one point per metaorder with a complete relaxation
/// window inside the session.
FairPricingResult fair_pricing_points(const std::vector<Metaorder>& metaorders,
                                      const ParamSeriesMap& series,
                                      const FairPricingOptions& options = {});

/// Sum over fills of quantity times executed price.
double portfolio_value_at_fills(const Metaorder& m);

/// Portfolio-domain fair pricing for one metaorder: the executed portfolio
/// against the same portfolio repriced from the slices prevailing at t0 and
/// t0 + 2T. Throws UndefinedError when the t0 valuation is zero.
FairPricingPoint portfolio_fair_pricing(const Metaorder& m, const SmileSlice& slice_t0,
                                        const SmileSlice& slice_t2, double discount = 1.0);

/// Portfolio-domain fair pricing over a population, with the same exclusion
/// and slope conventions as fair_pricing_points.
FairPricingResult portfolio_fair_pricing_points(const std::vector<Metaorder>& metaorders,
                                                const SliceSeriesMap& slices,
                                                const FairPricingOptions& options = {});

} // namespace volimpact
