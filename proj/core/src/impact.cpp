#include "volimpact/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volimpact {

double variation_proxy(const ParamSeries& series, Timestamp t0, Timestamp t) {
    if (series.empty()) throw LookupError("variation proxy on an empty series");
    if (t < t0) throw DomainError("variation proxy requires t >= t0");
    return series.value_at(t) - series.value_at(t0);
}

namespace {

std::vector<std::pair<double, double>> sorted_pairs(const std::vector<double>& x,
                                                    const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("bucket_means: x and y lengths differ");
    std::vector<std::pair<double, double>> pairs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pairs[i] = {x[i], y[i]};
    // lexicographic order makes the split independent of the input permutation
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<BucketStat> bucket_stats_sorted(const std::vector<std::pair<double, double>>& pairs,
                                            std::size_t n_buckets) {
    if (n_buckets < 1) throw DomainError("bucket count must be >= 1");
    if (pairs.size() < n_buckets)
        throw DomainError("bucket_means: fewer points than buckets");
    std::vector<BucketStat> out;
    out.reserve(n_buckets);
    const std::size_t base = pairs.size() / n_buckets;
    const std::size_t remainder = pairs.size() % n_buckets;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < n_buckets; ++b) {
        const std::size_t size = base + (b < remainder ? 1 : 0);
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = begin; i < begin + size; ++i) {
            sx += pairs[i].first;
            sy += pairs[i].second;
        }
        BucketStat stat;
        stat.count = size;
        stat.x_mean = sx / static_cast<double>(size);
        stat.y_mean = sy / static_cast<double>(size);
        if (size > 1) {
            double ss = 0.0;
            for (std::size_t i = begin; i < begin + size; ++i) {
                const double d = pairs[i].second - stat.y_mean;
                ss += d * d;
            }
            stat.y_stderr = std::sqrt(ss / static_cast<double>(size - 1)) /
                            std::sqrt(static_cast<double>(size));
        }
        out.push_back(stat);
        begin += size;
    }
    return out;
}

} // namespace

std::vector<BucketStat> bucket_stats(const std::vector<double>& x, const std::vector<double>& y,
                                     std::size_t n_buckets) {
    return bucket_stats_sorted(sorted_pairs(x, y), n_buckets);
}

std::vector<std::pair<double, double>> bucket_means(const std::vector<double>& x,
                                                    const std::vector<double>& y,
                                                    std::size_t n_buckets) {
    const auto stats = bucket_stats(x, y, n_buckets);
    std::vector<std::pair<double, double>> out;
    out.reserve(stats.size());
    for (const auto& s : stats) out.emplace_back(s.x_mean, s.y_mean);
    return out;
}

double daily_param_std(const ParamSeries& series, Day day, const TradingCalendar& calendar,
                       std::int64_t resample_ms) {
    if (resample_ms <= 0) throw DomainError("resample step must be positive");
    Timestamp lo = calendar.session_start(day);
    Timestamp hi = calendar.session_end(day);
    // clamp to the observed extent so the grid starts where data exists
    Timestamp first_in_day = 0, last_in_day = 0;
    bool any = false;
    for (const auto& p : series.points) {
        if (p.time < lo || p.time > hi) continue;
        if (!any) first_in_day = p.time;
        last_in_day = p.time;
        any = true;
    }
    if (!any) throw UndefinedError("no series points in day " + format_day(day));
    lo = std::max(lo, first_in_day);
    hi = std::min(hi, last_in_day);
    const std::int64_t n_steps = (hi - lo) / resample_ms;
    if (n_steps < 1) throw UndefinedError("fewer than 2 resampled points in day " + format_day(day));
    double sum = 0.0, sum2 = 0.0;
    const std::size_t n = static_cast<std::size_t>(n_steps) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = series.value_at(lo + static_cast<std::int64_t>(i) * resample_ms);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sum2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    return std::sqrt(std::max(var, 0.0));
}

namespace {

struct DailyStdCache {
    const ParamSeriesMap& series;
    const TradingCalendar& calendar;
    std::int64_t resample_ms;
    std::map<std::pair<std::string, Day>, double> cache;

    double get(const std::string& underlying, Day day) {
        auto key = std::make_pair(underlying, day);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double v = daily_param_std(series.at(underlying), day, calendar, resample_ms);
        cache.emplace(key, v);
        return v;
    }
};

} // namespace

ImpactCurve impact_curve(const std::vector<Metaorder>& metaorders, const ParamSeriesMap& series,
                         const ImpactCurveOptions& options) {
    if (options.n_buckets < 1) throw DomainError("impact curve needs at least one bucket");
    std::vector<double> exec_x, exec_y, relax_x, relax_y;
    ImpactCurve curve;
    DailyStdCache stds{series, options.calendar, options.resample_ms, {}};

    for (const auto& m : metaorders) {
        auto it = series.find(m.underlying_id);
        if (it == series.end() || m.sensitivity_total == 0.0) {
            ++curve.n_skipped;
            continue;
        }
        const ParamSeries& s = it->second;
        try {
            double scale = 1.0;
            if (options.normalization == ImpactNormalization::DailyStd) {
                scale = stds.get(m.underlying_id, m.day);
                if (!(scale > 0.0)) {
                    ++curve.n_skipped;
                    continue;
                }
            }
            const double theta0 = s.value_at(m.t0);
            const double sign = static_cast<double>(m.sign);
            for (const auto& f : m.fills) {
                exec_x.push_back(sensitivity_time(m, f.fill.timestamp));
                exec_y.push_back(sign * (s.value_at(f.fill.timestamp) - theta0) / scale);
            }
            const Timestamp t_end = m.t0 + m.duration_ms;
            for (std::size_t j = 1; j <= options.n_buckets; ++j) {
                const double frac =
                    static_cast<double>(j) / static_cast<double>(options.n_buckets);
                const Timestamp t = t_end + static_cast<Timestamp>(std::llround(
                                                frac * static_cast<double>(m.duration_ms)));
                relax_x.push_back(1.0 + frac);
                relax_y.push_back(sign * (s.value_at(t) - theta0) / scale);
            }
            ++curve.n_metaorders;
        } catch (const Error&) {
            ++curve.n_skipped;
        }
    }
    if (exec_x.empty()) throw UndefinedError("impact curve: no usable observations");

    const std::size_t exec_buckets = std::min(options.n_buckets, exec_x.size());
    const std::size_t relax_buckets = std::min(options.n_buckets, relax_x.size());
    curve.buckets = bucket_stats(exec_x, exec_y, exec_buckets);
    curve.n_execution_buckets = curve.buckets.size();
    const auto relax = bucket_stats(relax_x, relax_y, relax_buckets);
    curve.buckets.insert(curve.buckets.end(), relax.begin(), relax.end());

    curve.temporary_impact = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.n_execution_buckets; ++i)
        curve.temporary_impact = std::max(curve.temporary_impact, curve.buckets[i].y_mean);
    curve.impact_at_end = curve.buckets[curve.n_execution_buckets - 1].y_mean;

    const std::size_t tail = std::max<std::size_t>(1, relax.size() / 4);
    double perm = 0.0;
    for (std::size_t i = relax.size() - tail; i < relax.size(); ++i) perm += relax[i].y_mean;
    curve.permanent_impact = perm / static_cast<double>(tail);
    if (curve.temporary_impact != 0.0) {
        curve.relaxation_ratio = curve.permanent_impact / curve.temporary_impact;
        curve.ratio_defined = true;
    }
    return curve;
}

PowerLawFit fit_power_law(const std::vector<BucketStat>& buckets) {
    std::vector<double> lx, ly;
    for (const auto& b : buckets) {
        if (b.x_mean > 0.0 && b.y_mean > 0.0) {
            lx.push_back(std::log(b.x_mean));
            ly.push_back(std::log(b.y_mean));
        }
    }
    if (lx.size() < 3)
        throw FitError("power-law fit needs at least 3 positive buckets, have " +
                       std::to_string(lx.size()));
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("power-law fit is degenerate: zero x spread");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    fit.n_points = lx.size();
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

SqrtLawResult sqrt_law_fit(const std::vector<Metaorder>& metaorders, const ParamSeriesMap& series,
                           const DailySensitivityMap& market_sensitivity,
                           const SqrtLawOptions& options) {
    SqrtLawResult result;
    std::vector<double> rates, impacts;
    DailyStdCache stds{series, options.calendar, options.resample_ms, {}};
    for (const auto& m : metaorders) {
        auto s_it = series.find(m.underlying_id);
        auto v_it = market_sensitivity.find({m.underlying_id, m.day});
        if (s_it == series.end() || v_it == market_sensitivity.end()) {
            ++result.n_skipped;
            continue;
        }
        try {
            const double rate = participation_rate(m, v_it->second);
            const double sigma = stds.get(m.underlying_id, m.day);
            if (!(sigma > 0.0) || !(rate > 0.0)) {
                ++result.n_skipped;
                continue;
            }
            const double proxy = variation_proxy(s_it->second, m.t0, m.t0 + m.duration_ms);
            rates.push_back(rate);
            impacts.push_back(static_cast<double>(m.sign) * proxy / sigma);
            ++result.n_used;
        } catch (const Error&) {
            ++result.n_skipped;
        }
    }
    if (rates.size() < 3) throw FitError("square-root law fit: fewer than 3 usable metaorders");
    if (options.fit_raw_points) {
        std::vector<BucketStat> raw(rates.size());
        for (std::size_t i = 0; i < rates.size(); ++i)
            raw[i] = BucketStat{rates[i], impacts[i], 1, 0.0};
        result.buckets = bucket_stats(rates, impacts, std::min(options.n_buckets, rates.size()));
        result.fit = fit_power_law(raw);
    } else {
        result.buckets = bucket_stats(rates, impacts, std::min(options.n_buckets, rates.size()));
        result.fit = fit_power_law(result.buckets);
    }
    return result;
}

DispersionResult impact_vs_dispersion(const std::vector<Metaorder>& metaorders,
                                      const ParamSeriesMap& series, std::size_t n_buckets) {
    DispersionResult result;
    std::vector<double> xs, ys;
    for (const auto& m : metaorders) {
        auto it = series.find(m.underlying_id);
        if (it == series.end() || m.length() < 2) {
            ++result.n_skipped;
            continue;
        }
        try {
            const double d = strike_dispersion(m);
            const double proxy = variation_proxy(it->second, m.t0, m.t0 + m.duration_ms);
            xs.push_back(d);
            ys.push_back(static_cast<double>(m.sign) * proxy);
            ++result.n_used;
        } catch (const Error&) {
            ++result.n_skipped;
        }
    }
    if (xs.empty()) throw UndefinedError("dispersion analysis: no usable metaorders");
    result.buckets = bucket_stats(xs, ys, std::min(n_buckets, xs.size()));
    return result;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0; // average rank for ties
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("spearman: length mismatch");
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t n_bins,
                                    bool log_scale) {
    if (n_bins < 1) throw DomainError("histogram needs at least one bin");
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values) {
        if (log_scale && !(x > 0.0)) continue;
        v.push_back(log_scale ? std::log10(x) : x);
    }
    std::vector<HistogramBin> bins(n_bins);
    if (v.empty()) return bins;
    auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        const double l = lo + static_cast<double>(b) * width;
        const double u = l + width;
        bins[b].lower = log_scale ? std::pow(10.0, l) : l;
        bins[b].upper = log_scale ? std::pow(10.0, u) : u;
    }
    for (double x : v) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= n_bins) b = n_bins - 1;
        ++bins[b].count;
    }
    return bins;
}

} // namespace volimpact
