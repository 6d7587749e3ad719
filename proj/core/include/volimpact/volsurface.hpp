#pragma once

#include "volimpact/pricing.hpp"
#include "volimpact/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace volimpact {

/// Calibrated per-maturity smile at a snapshot time:
/// sigma(k) = atmf_vol + atmf_skew * k + curvature * k^2, k = ln(K/F).
struct SmileSlice {
    std::string underlying_id;
    Timestamp snapshot_time = 0;
    Timestamp expiry = 0;
    double forward = 0.0;
    double atmf_vol = 0.0;
    double atmf_skew = 0.0;
    double curvature = 0.0;
};

struct Quote {
    OptionSpec spec;
    double mid = 0.0;
    double weight = 0.0; // <= 0 means "use a vega weight"
};

struct QuoteSnapshot {
    std::string underlying_id;
    Timestamp snapshot_time = 0;
    Timestamp expiry = 0;
    std::optional<double> forward; // absent: derive via put-call parity
    std::vector<Quote> quotes;
};

struct SeriesPoint {
    Timestamp time = 0;
    double value = 0.0;
};

/// Time-ordered values of one smile parameter for one underlying.
struct ParamSeries {
    std::string underlying_id;
    Parameter parameter = Parameter::AtmfVol;
    std::vector<SeriesPoint> points; // strictly increasing timestamps

    /// Last value at or before t. Throws LookupError if none exists.
    double value_at(Timestamp t) const;
    bool empty() const { return points.empty(); }
};

/// Time-ordered calibrated slices for one underlying.
class SliceSeries {
public:
    SliceSeries() = default;
    explicit SliceSeries(std::vector<SmileSlice> slices) : slices_(std::move(slices)) {}

    void push_back(SmileSlice s) { slices_.push_back(std::move(s)); }

    /// Last slice at or before t, nullptr if none.
    const SmileSlice* at_or_before(Timestamp t) const;

    const std::vector<SmileSlice>& slices() const { return slices_; }
    bool empty() const { return slices_.empty(); }

private:
    std::vector<SmileSlice> slices_;
};

using SliceSeriesMap = std::map<std::string, SliceSeries>;
using ParamSeriesMap = std::map<std::string, ParamSeries>;

/// Smile vol at a strike. Throws DomainError for strike <= 0.
double smile_vol(const SmileSlice& slice, double strike);

/// F = K + (C - P) / discount.
double forward_from_parity(double call_mid, double put_mid, double strike, double discount = 1.0);

struct CalibrationOptions {
    double discount = 1.0;
    /// When set, the quadratic term is held fixed and only level and skew are fit.
    std::optional<double> frozen_curvature;
    /// Hint for the parity strike when the snapshot carries no forward.
    std::optional<double> forward_hint;
};

struct QuoteIssue {
    std::size_t quote_index = 0;
    std::string reason;
};

struct CalibrationResult {
    SmileSlice slice;
    double residual_rms = 0.0; // weighted RMS of vol residuals
    std::size_t n_used = 0;
    std::vector<QuoteIssue> excluded;
};

/// Weighted least-squares fit of (atmf_vol, atmf_skew, curvature) to the
/// implied vols of the snapshot's quotes. Quotes that fail implied-vol
/// inversion are excluded and reported. Throws CalibrationError when fewer
/// than 3 distinct strikes remain (2 with frozen curvature) or when the
/// fitted smile is not positive over the quoted moneyness range.
CalibrationResult calibrate_slice(const QuoteSnapshot& snapshot,
                                  const CalibrationOptions& options = {});

/// Signed currency exposure of a fill to a unit move of the parameter:
/// side * quantity * vega * d sigma / d theta, with d sigma / d atmf_vol = 1
/// and d sigma / d atmf_skew = ln(K/F).
double param_sensitivity(const SmileSlice& slice, const OptionSpec& spec, int side,
                         double quantity, Parameter parameter, double discount = 1.0);

struct CalibratedSeries {
    SliceSeries slices;
    std::size_t n_skipped = 0;
    std::vector<std::string> diagnostics;
};

/// Calibrates every snapshot in time order. Failed snapshots are skipped and
/// counted. Curvature is frozen to the previous slice's value whenever a
/// snapshot has exactly 2 usable strikes; the previous forward seeds parity
/// recovery when the forward column is missing.
CalibratedSeries calibrate_series(const std::vector<QuoteSnapshot>& snapshots,
                                  const CalibrationOptions& options = {});

struct ParamSeriesBuild {
    ParamSeries series;
    std::size_t n_skipped = 0;
};

/// One series point per successfully calibrated snapshot.
/// Throws CalibrationError when no snapshot calibrates.
ParamSeriesBuild build_param_series(const std::vector<QuoteSnapshot>& snapshots,
                                    Parameter parameter, const CalibrationOptions& options = {});

/// Extracts the series of one parameter from already calibrated slices.
ParamSeries extract_param_series(const SliceSeries& slices, Parameter parameter);

/// Pricing inputs for an option marked against a calibrated slice
/// (ACT/365 time from the slice's snapshot time).
PricingInputs inputs_from_slice(const SmileSlice& slice, const OptionSpec& spec,
                                double discount = 1.0);

} // namespace volimpact
