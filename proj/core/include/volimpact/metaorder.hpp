#pragma once

#include "volimpact/types.hpp"
#include "volimpact/volsurface.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace volimpact {

/// A fill with its sensitivity evaluated against the prevailing slice.
struct MetaorderFill {
    TradeFill fill;
    double sensitivity = 0.0; // side * quantity * vega * dsigma/dtheta
    double kf_ratio = 0.0;    // strike / forward at the fill's slice
    std::size_t input_index = 0;
};

/// Consecutive fills by one agent on one underlying within one day whose
/// sensitivity keeps a single sign.
struct Metaorder {
    std::string id;
    std::string agent_id;
    std::string underlying_id;
    Day day = 0;
    int ordinal = 0; // sequence number within (agent, underlying, day)
    Parameter parameter = Parameter::AtmfVol;
    std::vector<MetaorderFill> fills;
    Timestamp t0 = 0;
    std::int64_t duration_ms = 1; // last fill - first fill, floored at 1ms
    double sensitivity_total = 0.0;
    int sign = +1;

    std::size_t length() const { return fills.size(); }
    Timestamp end_time() const { return t0 + duration_ms; }
    double duration_seconds() const { return static_cast<double>(duration_ms) / 1000.0; }
};

struct QuarantinedFill {
    TradeFill fill;
    std::size_t input_index = 0;
    std::string reason;
};

struct StitchOptions {
    TradingCalendar calendar;
    double discount = 1.0;
    /// When set, a gap of more than this many seconds between consecutive
    /// fills also closes the open metaorder. Off by default.
    std::optional<double> gap_split_seconds;
};

struct StitchResult {
    std::vector<Metaorder> metaorders;
    std::vector<QuarantinedFill> quarantined;
};

/// Groups time-sorted fills by (agent, underlying, day) and splits each group
/// whenever the sensitivity sign flips. Zero-sensitivity fills attach to the
/// open run without flipping it. Fills with no covering slice are quarantined.
StitchResult stitch_metaorders(const std::vector<TradeFill>& fills, const SliceSeriesMap& slices,
                               Parameter parameter, const StitchOptions& options = {});

/// Keeps metaorders with at least n_star fills.
std::vector<Metaorder> filter_min_length(const std::vector<Metaorder>& metaorders,
                                         std::size_t n_star);

struct DailySensitivity {
    double value = 0.0;
    std::size_t n_unpriced = 0;
    bool empty_day = false;
};

/// Sum of |sensitivity| over every fill of the day; the market-wide absolute
/// sensitivity shared by all the day's metaorders.
DailySensitivity daily_market_sensitivity(const std::vector<TradeFill>& fills_of_day,
                                          const SliceSeriesMap& slices, Parameter parameter,
                                          double discount = 1.0);

/// |metaorder sensitivity| / market sensitivity. Throws UndefinedError when
/// the market total is not positive.
double participation_rate(const Metaorder& m, double market_sensitivity);

/// Sensitivity-weighted unbiased standard deviation of the fills' K/F ratios.
/// Throws UndefinedError when the total weight is zero, DomainError for
/// metaorders with fewer than 2 fills.
double strike_dispersion(const Metaorder& m);

/// Rescaled clock on [0, 2]: executed sensitivity fraction during execution,
/// physical time during relaxation. Throws DomainError outside
/// [t0, t0 + 2T], UndefinedError when the metaorder's sensitivity is zero.
double sensitivity_time(const Metaorder& m, Timestamp t);

} // namespace volimpact
