#pragma once

#include "volimpact/errors.hpp"
#include "volimpact/time.hpp"

#include <string>
#include <string_view>

namespace volimpact {

enum class OptionKind { Call, Put };

/// Implied-volatility smile parameter under study.
enum class Parameter { AtmfVol, AtmfSkew };

inline std::string to_string(OptionKind k) { return k == OptionKind::Call ? "C" : "P"; }

inline OptionKind option_kind_from_string(std::string_view s) {
    if (s == "C" || s == "c" || s == "call" || s == "CALL") return OptionKind::Call;
    if (s == "P" || s == "p" || s == "put" || s == "PUT") return OptionKind::Put;
    throw SchemaError("unknown option kind: '" + std::string(s) + "'");
}

inline std::string to_string(Parameter p) {
    return p == Parameter::AtmfVol ? "atmf_vol" : "atmf_skew";
}

inline Parameter parameter_from_string(std::string_view s) {
    if (s == "atmf_vol" || s == "vol") return Parameter::AtmfVol;
    if (s == "atmf_skew" || s == "skew") return Parameter::AtmfSkew;
    throw ConfigError("unknown parameter: '" + std::string(s) + "'");
}

/// European option contract terms.
struct OptionSpec {
    double strike = 0.0;
    Timestamp expiry = 0;
    OptionKind kind = OptionKind::Call;
};

/// One child-order execution.
struct TradeFill {
    Timestamp timestamp = 0;
    std::string agent_id;
    std::string underlying_id;
    std::string option_id;
    OptionSpec option;
    int side = +1;       // +1 buy, -1 sell
    double quantity = 0; // contracts, > 0
    double price = 0;    // executed premium per contract
    bool aggressive = true;
};

/// Maps timestamps to trading days and bounds the trading session.
/// Session times are millisecond offsets within the UTC day.
struct TradingCalendar {
    std::int64_t session_open_ms = 0;
    std::int64_t session_close_ms = kMsPerDay;

    Day day_of(Timestamp t) const { return volimpact::day_of(t); }
    Timestamp session_start(Day d) const { return day_start(d) + session_open_ms; }
    Timestamp session_end(Day d) const { return day_start(d) + session_close_ms; }
    bool in_session(Timestamp t) const {
        const Day d = day_of(t);
        return t >= session_start(d) && t <= session_end(d);
    }
};

} // namespace volimpact
