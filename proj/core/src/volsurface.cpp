#include "volimpact/volsurface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace volimpact {

double ParamSeries::value_at(Timestamp t) const {
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](Timestamp lhs, const SeriesPoint& p) { return lhs < p.time; });
    if (it == points.begin())
        throw LookupError("no series value at or before " + format_timestamp(t));
    return std::prev(it)->value;
}

const SmileSlice* SliceSeries::at_or_before(Timestamp t) const {
    auto it = std::upper_bound(slices_.begin(), slices_.end(), t,
                               [](Timestamp lhs, const SmileSlice& s) { return lhs < s.snapshot_time; });
    if (it == slices_.begin()) return nullptr;
    return &*std::prev(it);
}

double smile_vol(const SmileSlice& slice, double strike) {
    if (!(strike > 0.0)) throw DomainError("strike must be positive, got " + std::to_string(strike));
    const double k = std::log(strike / slice.forward);
    return slice.atmf_vol + slice.atmf_skew * k + slice.curvature * k * k;
}

double forward_from_parity(double call_mid, double put_mid, double strike, double discount) {
    if (!(discount > 0.0) || discount > 1.0)
        throw DomainError("discount must be in (0, 1], got " + std::to_string(discount));
    const double f = strike + (call_mid - put_mid) / discount;
    if (!std::isfinite(f) || f <= 0.0)
        throw DomainError("parity forward is not a positive finite value");
    return f;
}

PricingInputs inputs_from_slice(const SmileSlice& slice, const OptionSpec& spec, double discount) {
    PricingInputs in;
    in.forward = slice.forward;
    in.time_to_expiry = year_fraction(slice.snapshot_time, spec.expiry);
    in.vol = smile_vol(slice, spec.strike);
    in.discount = discount;
    return in;
}

double param_sensitivity(const SmileSlice& slice, const OptionSpec& spec, int side, double quantity,
                         Parameter parameter, double discount) {
    if (!(quantity > 0.0))
        throw DomainError("quantity must be positive, got " + std::to_string(quantity));
    if (side != +1 && side != -1) throw DomainError("side must be +1 or -1");
    const PricingInputs in = inputs_from_slice(slice, spec, discount);
    const double dsigma_dtheta =
        parameter == Parameter::AtmfVol ? 1.0 : std::log(spec.strike / slice.forward);
    return static_cast<double>(side) * quantity * vega(spec, in) * dsigma_dtheta;
}

namespace {

// Solves the 3x3 (or 2x2) weighted normal equations with partial pivoting.
template <std::size_t N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-14)
            throw CalibrationError("singular normal equations (degenerate strike layout)");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

double resolve_forward(const QuoteSnapshot& snap, const CalibrationOptions& opts) {
    if (snap.forward) {
        if (!(*snap.forward > 0.0)) throw CalibrationError("snapshot forward not positive");
        return *snap.forward;
    }
    // Pair calls and puts by strike; use the pair nearest the hint (or the
    // median strike when there is no hint).
    std::map<double, std::array<const Quote*, 2>> by_strike;
    for (const auto& q : snap.quotes)
        by_strike[q.spec.strike][q.spec.kind == OptionKind::Call ? 0 : 1] = &q;
    std::vector<double> paired;
    for (const auto& [strike, pair] : by_strike)
        if (pair[0] && pair[1]) paired.push_back(strike);
    if (paired.empty())
        throw CalibrationError("no forward column and no call/put pair for parity recovery");
    double target = opts.forward_hint.value_or(paired[paired.size() / 2]);
    double best = paired.front();
    for (double k : paired)
        if (std::abs(k - target) < std::abs(best - target)) best = k;
    const auto& pair = by_strike[best];
    return forward_from_parity(pair[0]->mid, pair[1]->mid, best, opts.discount);
}

// Minimum of the fitted quadratic over [k_lo, k_hi].
double smile_min(double a, double b, double c, double k_lo, double k_hi) {
    double m = std::min(a + b * k_lo + c * k_lo * k_lo, a + b * k_hi + c * k_hi * k_hi);
    if (c > 0.0) {
        const double k_v = -b / (2.0 * c);
        if (k_v > k_lo && k_v < k_hi) m = std::min(m, a + b * k_v + c * k_v * k_v);
    }
    return m;
}

} // namespace

CalibrationResult calibrate_slice(const QuoteSnapshot& snapshot, const CalibrationOptions& options) {
    if (snapshot.quotes.empty()) throw CalibrationError("snapshot has no quotes");
    const double forward = resolve_forward(snapshot, options);
    const double tte = year_fraction(snapshot.snapshot_time, snapshot.expiry);
    if (!(tte > 0.0)) throw CalibrationError("snapshot at or after expiry");

    CalibrationResult result;
    struct Obs {
        double k, vol, weight;
    };
    std::vector<Obs> obs;
    obs.reserve(snapshot.quotes.size());
    std::set<double> strikes;
    for (std::size_t i = 0; i < snapshot.quotes.size(); ++i) {
        const Quote& q = snapshot.quotes[i];
        if (q.spec.expiry != snapshot.expiry) {
            result.excluded.push_back({i, "expiry differs from snapshot expiry"});
            continue;
        }
        try {
            const double iv = implied_vol(q.spec, q.mid, forward, tte, options.discount);
            double w = q.weight;
            if (!(w > 0.0))
                w = vega(q.spec, PricingInputs{forward, tte, std::max(iv, 1e-4), options.discount});
            if (!(w > 0.0)) w = 1e-12;
            obs.push_back({std::log(q.spec.strike / forward), iv, w});
            strikes.insert(q.spec.strike);
        } catch (const Error& e) {
            result.excluded.push_back({i, e.what()});
        }
    }

    const bool fit_curvature = !options.frozen_curvature.has_value();
    const std::size_t min_strikes = fit_curvature ? 3 : 2;
    if (strikes.size() < min_strikes)
        throw CalibrationError("need at least " + std::to_string(min_strikes) +
                               " usable strikes, have " + std::to_string(strikes.size()));

    double a = 0.0, b = 0.0, c = options.frozen_curvature.value_or(0.0);
    if (fit_curvature) {
        std::array<std::array<double, 3>, 3> m{};
        std::array<double, 3> rhs{};
        for (const auto& o : obs) {
            const std::array<double, 3> phi{1.0, o.k, o.k * o.k};
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t s = 0; s < 3; ++s) m[r][s] += o.weight * phi[r] * phi[s];
                rhs[r] += o.weight * phi[r] * o.vol;
            }
        }
        const auto x = solve_linear<3>(m, rhs);
        a = x[0];
        b = x[1];
        c = x[2];
    } else {
        std::array<std::array<double, 2>, 2> m{};
        std::array<double, 2> rhs{};
        for (const auto& o : obs) {
            const double y = o.vol - c * o.k * o.k;
            const std::array<double, 2> phi{1.0, o.k};
            for (std::size_t r = 0; r < 2; ++r) {
                for (std::size_t s = 0; s < 2; ++s) m[r][s] += o.weight * phi[r] * phi[s];
                rhs[r] += o.weight * phi[r] * y;
            }
        }
        const auto x = solve_linear<2>(m, rhs);
        a = x[0];
        b = x[1];
    }

    double k_lo = obs.front().k, k_hi = obs.front().k;
    double wsum = 0.0, wrss = 0.0;
    for (const auto& o : obs) {
        k_lo = std::min(k_lo, o.k);
        k_hi = std::max(k_hi, o.k);
        const double r = a + b * o.k + c * o.k * o.k - o.vol;
        wsum += o.weight;
        wrss += o.weight * r * r;
    }
    if (smile_min(a, b, c, k_lo, k_hi) <= 0.0)
        throw CalibrationError("fitted smile non-positive over the quoted moneyness range");

    result.slice = SmileSlice{snapshot.underlying_id, snapshot.snapshot_time, snapshot.expiry,
                              forward,               a,                       b,
                              c};
    result.residual_rms = std::sqrt(wrss / wsum);
    result.n_used = obs.size();
    return result;
}

CalibratedSeries calibrate_series(const std::vector<QuoteSnapshot>& snapshots,
                                  const CalibrationOptions& options) {
    CalibratedSeries out;
    CalibrationOptions opts = options;
    for (const auto& snap : snapshots) {
        std::set<double> strikes;
        for (const auto& q : snap.quotes) strikes.insert(q.spec.strike);
        CalibrationOptions snap_opts = opts;
        // Thin snapshot: keep the series alive by carrying the last curvature.
        if (strikes.size() == 2 && !snap_opts.frozen_curvature && !out.slices.empty())
            snap_opts.frozen_curvature = out.slices.slices().back().curvature;
        try {
            auto res = calibrate_slice(snap, snap_opts);
            opts.forward_hint = res.slice.forward;
            out.slices.push_back(std::move(res.slice));
        } catch (const Error& e) {
            ++out.n_skipped;
            out.diagnostics.push_back(format_timestamp(snap.snapshot_time) + ": " + e.what());
        }
    }
    return out;
}

ParamSeries extract_param_series(const SliceSeries& slices, Parameter parameter) {
    ParamSeries series;
    series.parameter = parameter;
    if (!slices.empty()) series.underlying_id = slices.slices().front().underlying_id;
    series.points.reserve(slices.slices().size());
    for (const auto& s : slices.slices()) {
        const double v = parameter == Parameter::AtmfVol ? s.atmf_vol : s.atmf_skew;
        if (!series.points.empty() && series.points.back().time == s.snapshot_time)
            series.points.back().value = v;
        else
            series.points.push_back({s.snapshot_time, v});
    }
    return series;
}

ParamSeriesBuild build_param_series(const std::vector<QuoteSnapshot>& snapshots, Parameter parameter,
                                    const CalibrationOptions& options) {
    auto calibrated = calibrate_series(snapshots, options);
    if (calibrated.slices.empty())
        throw CalibrationError("no snapshot calibrated successfully; series would be empty");
    return ParamSeriesBuild{extract_param_series(calibrated.slices, parameter),
                            calibrated.n_skipped};
}

} // namespace volimpact
