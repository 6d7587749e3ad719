#include "volimpact/metaorder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace volimpact {

namespace {

struct GroupKey {
    std::string agent;
    std::string underlying;
    Day day;
    auto operator<=>(const GroupKey&) const = default;
};

Metaorder finalize_run(std::vector<MetaorderFill> fills, const GroupKey& key, int ordinal,
                       Parameter parameter, int sign) {
    Metaorder m;
    m.agent_id = key.agent;
    m.underlying_id = key.underlying;
    m.day = key.day;
    m.ordinal = ordinal;
    m.parameter = parameter;
    m.t0 = fills.front().fill.timestamp;
    m.duration_ms = std::max<std::int64_t>(fills.back().fill.timestamp - m.t0, 1);
    m.sign = sign;
    for (const auto& f : fills) m.sensitivity_total += f.sensitivity;
    m.fills = std::move(fills);
    m.id = m.agent_id + "/" + m.underlying_id + "/" + format_day(m.day) + "/" +
           std::to_string(m.ordinal);
    return m;
}

} // namespace

StitchResult stitch_metaorders(const std::vector<TradeFill>& fills, const SliceSeriesMap& slices,
                               Parameter parameter, const StitchOptions& options) {
    StitchResult result;

    struct OpenRun {
        std::vector<MetaorderFill> fills;
        int sign = 0; // 0 until the first nonzero sensitivity
        int next_ordinal = 0;
    };
    std::map<GroupKey, OpenRun> open;

    auto close_run = [&](const GroupKey& key, OpenRun& run) {
        if (run.fills.empty()) return;
        result.metaorders.push_back(finalize_run(std::move(run.fills), key, run.next_ordinal,
                                                 parameter, run.sign == 0 ? +1 : run.sign));
        run.fills.clear();
        run.sign = 0;
        ++run.next_ordinal;
    };

    for (std::size_t i = 0; i < fills.size(); ++i) {
        const TradeFill& f = fills[i];
        const GroupKey key{f.agent_id, f.underlying_id, options.calendar.day_of(f.timestamp)};

        auto series_it = slices.find(f.underlying_id);
        const SmileSlice* slice =
            series_it != slices.end() ? series_it->second.at_or_before(f.timestamp) : nullptr;
        if (slice == nullptr) {
            result.quarantined.push_back({f, i, "no calibrated slice at or before fill time"});
            continue;
        }

        double s;
        try {
            s = param_sensitivity(*slice, f.option, f.side, f.quantity, parameter, options.discount);
        } catch (const Error& e) {
            result.quarantined.push_back({f, i, e.what()});
            continue;
        }

        OpenRun& run = open[key];
        const int fill_sign = s > 0.0 ? +1 : (s < 0.0 ? -1 : 0);
        bool split = fill_sign != 0 && run.sign != 0 && fill_sign != run.sign;
        if (options.gap_split_seconds && !run.fills.empty()) {
            const double gap =
                static_cast<double>(f.timestamp - run.fills.back().fill.timestamp) / 1000.0;
            if (gap > *options.gap_split_seconds) split = true;
        }
        if (split) close_run(key, run);
        if (run.sign == 0) run.sign = fill_sign;
        run.fills.push_back({f, s, f.option.strike / slice->forward, i});
    }
    for (auto& [key, run] : open) close_run(key, run);

    // std::map closing order is key order; restore the stream order.
    std::sort(result.metaorders.begin(), result.metaorders.end(),
              [](const Metaorder& a, const Metaorder& b) {
                  return a.fills.front().input_index < b.fills.front().input_index;
              });
    return result;
}

std::vector<Metaorder> filter_min_length(const std::vector<Metaorder>& metaorders,
                                         std::size_t n_star) {
    if (n_star < 1) throw DomainError("n_star must be >= 1");
    std::vector<Metaorder> out;
    out.reserve(metaorders.size());
    for (const auto& m : metaorders)
        if (m.length() >= n_star) out.push_back(m);
    return out;
}

DailySensitivity daily_market_sensitivity(const std::vector<TradeFill>& fills_of_day,
                                          const SliceSeriesMap& slices, Parameter parameter,
                                          double discount) {
    DailySensitivity out;
    out.empty_day = fills_of_day.empty();
    for (const auto& f : fills_of_day) {
        auto it = slices.find(f.underlying_id);
        const SmileSlice* slice = it != slices.end() ? it->second.at_or_before(f.timestamp) : nullptr;
        if (slice == nullptr) {
            ++out.n_unpriced;
            continue;
        }
        try {
            out.value += std::abs(param_sensitivity(*slice, f.option, f.side, f.quantity, parameter,
                                                    discount));
        } catch (const Error&) {
            ++out.n_unpriced;
        }
    }
    return out;
}

double participation_rate(const Metaorder& m, double market_sensitivity) {
    if (!(market_sensitivity > 0.0))
        throw UndefinedError("participation rate undefined: market sensitivity is not positive");
    return std::abs(m.sensitivity_total) / market_sensitivity;
}

double strike_dispersion(const Metaorder& m) {
    if (m.length() < 2) throw DomainError("strike dispersion needs at least 2 fills");
    double w_sum = 0.0, w2_sum = 0.0, wx_sum = 0.0;
    for (const auto& f : m.fills) {
        const double w = std::abs(f.sensitivity);
        w_sum += w;
        w2_sum += w * w;
        wx_sum += w * f.kf_ratio;
    }
    if (!(w_sum > 0.0)) throw UndefinedError("strike dispersion undefined: zero total weight");
    const double mean = wx_sum / w_sum;
    double ss = 0.0;
    for (const auto& f : m.fills) {
        const double d = f.kf_ratio - mean;
        ss += std::abs(f.sensitivity) * d * d;
    }
    const double denom = w_sum - w2_sum / w_sum;
    if (!(denom > 0.0)) return 0.0; // all weight on one fill
    return std::sqrt(ss / denom);
}

double sensitivity_time(const Metaorder& m, Timestamp t) {
    const Timestamp t_end = m.t0 + m.duration_ms;
    if (t < m.t0 || t > m.t0 + 2 * m.duration_ms)
        throw DomainError("time outside the metaorder's [t0, t0 + 2T] window");
    if (t > t_end)
        return 1.0 + static_cast<double>(t - t_end) / static_cast<double>(m.duration_ms);
    if (m.sensitivity_total == 0.0)
        throw UndefinedError("sensitivity time undefined: metaorder has zero total sensitivity");
    double executed = 0.0;
    for (const auto& f : m.fills) {
        if (f.fill.timestamp > t) break;
        executed += f.sensitivity;
    }
    return executed / m.sensitivity_total;
}

} // namespace volimpact
