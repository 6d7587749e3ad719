#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace volimpact {

/// Milliseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Whole days since the Unix epoch (UTC calendar date).
using Day = std::int32_t;

inline constexpr std::int64_t kMsPerSecond = 1000;
inline constexpr std::int64_t kMsPerMinute = 60 * kMsPerSecond;
inline constexpr std::int64_t kMsPerHour = 60 * kMsPerMinute;
inline constexpr std::int64_t kMsPerDay = 24 * kMsPerHour;

/// ACT/365 fixed year fraction between two timestamps.
inline double year_fraction(Timestamp from, Timestamp to) {
    return static_cast<double>(to - from) / (365.0 * static_cast<double>(kMsPerDay));
}

inline Day day_of(Timestamp t) {
    // floor division, timestamps may precede the epoch in tests
    std::int64_t d = t / kMsPerDay;
    if (t % kMsPerDay < 0) --d;
    return static_cast<Day>(d);
}

inline Timestamp day_start(Day d) {
    return static_cast<Timestamp>(d) * kMsPerDay;
}

/// Days since epoch for a civil UTC date.
Day make_day(int year, int month, int day);

/// Timestamp for a civil UTC date-time.
Timestamp make_timestamp(int year, int month, int day, int hour = 0, int minute = 0,
                         int second = 0, int millisecond = 0);

/// Parses ISO-8601 UTC ("2016-07-01T09:00:00.000Z", milliseconds and 'Z' optional).
/// Throws SchemaError on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_timestamp(Timestamp t);

/// "YYYY-MM-DD"
std::string format_day(Day d);

/// Parses "YYYY-MM-DD".
Day parse_day(std::string_view text);

/// Parses "HH:MM" or "HH:MM:SS" into a millisecond offset within a day.
/// "24:00" and "24:00:00" are accepted as end of day.
std::int64_t parse_time_of_day(std::string_view text);

} // namespace volimpact
