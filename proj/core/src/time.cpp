#include "volimpact/time.hpp"

#include "volimpact/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace volimpact {

namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view what) {
    if (pos + len > s.size()) throw SchemaError("timestamp too short while reading " + std::string(what));
    int out = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    if (ec != std::errc{} || ptr != s.data() + pos + len)
        throw SchemaError("bad " + std::string(what) + " in '" + std::string(s) + "'");
    return out;
}

} // namespace

Day make_day(int year, int month, int day) {
    return static_cast<Day>(days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)));
}

Timestamp make_timestamp(int year, int month, int day, int hour, int minute, int second, int millisecond) {
    return day_start(make_day(year, month, day)) + hour * kMsPerHour + minute * kMsPerMinute +
           second * kMsPerSecond + millisecond;
}

Timestamp parse_timestamp(std::string_view s) {
    // YYYY-MM-DD[T ]HH:MM:SS[.mmm][Z]
    if (s.size() < 19) throw SchemaError("timestamp too short: '" + std::string(s) + "'");
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
        throw SchemaError("malformed timestamp: '" + std::string(s) + "'");
    const int year = parse_int(s, 0, 4, "year");
    const int month = parse_int(s, 5, 2, "month");
    const int day = parse_int(s, 8, 2, "day");
    const int hour = parse_int(s, 11, 2, "hour");
    const int minute = parse_int(s, 14, 2, "minute");
    const int second = parse_int(s, 17, 2, "second");
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw SchemaError("timestamp field out of range: '" + std::string(s) + "'");
    int ms = 0;
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ms = parse_int(s, pos + 1, 3, "milliseconds");
        pos += 4;
    }
    if (pos < s.size() && s[pos] == 'Z') ++pos;
    if (pos != s.size()) throw SchemaError("trailing characters in timestamp: '" + std::string(s) + "'");
    return make_timestamp(year, month, day, hour, minute, second, ms);
}

std::string format_timestamp(Timestamp t) {
    const Day d = day_of(t);
    std::int64_t rem = t - day_start(d);
    int y;
    unsigned m, dd;
    civil_from_days(d, y, m, dd);
    const int hour = static_cast<int>(rem / kMsPerHour);
    rem %= kMsPerHour;
    const int minute = static_cast<int>(rem / kMsPerMinute);
    rem %= kMsPerMinute;
    const int second = static_cast<int>(rem / kMsPerSecond);
    const int ms = static_cast<int>(rem % kMsPerSecond);
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", y, m, dd, hour,
                  minute, second, ms);
    return std::string(buf.data());
}

std::string format_day(Day d) {
    int y;
    unsigned m, dd;
    civil_from_days(d, y, m, dd);
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", y, m, dd);
    return std::string(buf.data());
}

Day parse_day(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw SchemaError("malformed date: '" + std::string(s) + "'");
    return make_day(parse_int(s, 0, 4, "year"), parse_int(s, 5, 2, "month"), parse_int(s, 8, 2, "day"));
}

std::int64_t parse_time_of_day(std::string_view s) {
    if (s.size() != 5 && s.size() != 8) throw ConfigError("malformed time of day: '" + std::string(s) + "'");
    if (s[2] != ':' || (s.size() == 8 && s[5] != ':'))
        throw ConfigError("malformed time of day: '" + std::string(s) + "'");
    const int hour = parse_int(s, 0, 2, "hour");
    const int minute = parse_int(s, 3, 2, "minute");
    const int second = s.size() == 8 ? parse_int(s, 6, 2, "second") : 0;
    if (hour > 24 || minute > 59 || second > 59 || (hour == 24 && (minute != 0 || second != 0)))
        throw ConfigError("time of day out of range: '" + std::string(s) + "'");
    return hour * kMsPerHour + minute * kMsPerMinute + second * kMsPerSecond;
}

} // namespace volimpact
