#pragma once

#include "volimpact/metaorder.hpp"
#include "volimpact/volsurface.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace volimpact {

/// One pooled observation of the signed variation proxy on the rescaled clock.
struct ImpactObservation {
    std::string metaorder_id;
    double rescaled_time = 0.0; // in [0, 2]
    double signed_impact = 0.0; // sign * (theta_t - theta_t0)
};

struct BucketStat {
    double x_mean = 0.0;
    double y_mean = 0.0;
    std::size_t count = 0;
    double y_stderr = 0.0;
};

/// theta_t - theta_t0 with last-value lookups.
double variation_proxy(const ParamSeries& series, Timestamp t0, Timestamp t);

/// Sorts pairs by x, splits them into n_buckets contiguous near-equal groups
/// (sizes differ by at most one, larger groups first) and returns per-group
/// means in x order.
std::vector<std::pair<double, double>> bucket_means(const std::vector<double>& x,
                                                    const std::vector<double>& y,
                                                    std::size_t n_buckets);

/// Same bucketing with counts and standard errors.
std::vector<BucketStat> bucket_stats(const std::vector<double>& x, const std::vector<double>& y,
                                     std::size_t n_buckets);

enum class ImpactNormalization {
    None,    // raw parameter units
    DailyStd // divide each observation by its day's parameter std
};

struct ImpactCurveOptions {
    std::size_t n_buckets = 50; // per phase
    ImpactNormalization normalization = ImpactNormalization::None;
    TradingCalendar calendar;
    std::int64_t resample_ms = 60 * kMsPerSecond; // grid for the daily std
};

struct ImpactCurve {
    std::vector<BucketStat> buckets; // execution buckets then relaxation buckets
    std::size_t n_execution_buckets = 0;
    double temporary_impact = 0.0;  // peak execution bucket mean
    double impact_at_end = 0.0;     // last execution bucket mean (t = 1)
    double permanent_impact = 0.0;  // mean of the last quartile of relaxation buckets
    double relaxation_ratio = 0.0;  // permanent / temporary
    bool ratio_defined = false;
    std::size_t n_metaorders = 0;
    std::size_t n_skipped = 0;
};

/// Pools signed variation-proxy observations over all metaorders, sampled at
/// fill times during execution and on a uniform physical grid during
/// relaxation, and buckets the two phases separately.
ImpactCurve impact_curve(const std::vector<Metaorder>& metaorders, const ParamSeriesMap& series,
                         const ImpactCurveOptions& options = {});

/// Standard deviation of the parameter resampled on a fixed grid
/// (last-value interpolation) over the day's session. Throws UndefinedError
/// when fewer than 2 grid points are available.
double daily_param_std(const ParamSeries& series, Day day, const TradingCalendar& calendar = {},
                       std::int64_t resample_ms = 60 * kMsPerSecond);

struct PowerLawFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

/// Ordinary least squares of log y on log x over buckets with positive
/// means. Throws FitError with fewer than 3 usable buckets.
PowerLawFit fit_power_law(const std::vector<BucketStat>& buckets);

/// Market sensitivity per (underlying, day).
using DailySensitivityMap = std::map<std::pair<std::string, Day>, double>;

struct SqrtLawOptions {
    std::size_t n_buckets = 20;
    TradingCalendar calendar;
    std::int64_t resample_ms = 60 * kMsPerSecond;
    bool fit_raw_points = false; // regress raw metaorder points instead of buckets
};

struct SqrtLawResult {
    PowerLawFit fit;
    std::vector<BucketStat> buckets; // (participation rate, sign * I_T / daily std)
    std::size_t n_used = 0;
    std::size_t n_skipped = 0;
};

/// Volatility-normalized end-of-execution impact against the daily
/// participation rate, bucketed and fit as a power law.
SqrtLawResult sqrt_law_fit(const std::vector<Metaorder>& metaorders, const ParamSeriesMap& series,
                           const DailySensitivityMap& market_sensitivity,
                           const SqrtLawOptions& options = {});

struct DispersionResult {
    std::vector<BucketStat> buckets; // (strike dispersion, sign * I_T)
    std::size_t n_used = 0;
    std::size_t n_skipped = 0;
};

/// End-of-execution impact bucketed against the strike dispersion.
DispersionResult impact_vs_dispersion(const std::vector<Metaorder>& metaorders,
                                      const ParamSeriesMap& series, std::size_t n_buckets);

/// Spearman rank correlation of (x, y) pairs; NaN-safe for < 2 points.
double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

/// Fixed-width histogram; log10-spaced bins when log_scale is set (values
/// <= 0 are dropped in that case).
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t n_bins,
                                    bool log_scale = false);

} // namespace volimpact
