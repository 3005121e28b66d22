#include "lmdetect/time_util.hpp"

#include <charconv>
#include <cstdio>

#include "lmdetect/errors.hpp"

namespace lmd {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date
// (Howard Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

unsigned parse_fixed_uint(std::string_view text, size_t pos, size_t len) {
    unsigned value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw ParseError("bad timestamp field in '" + std::string(text) + "'");
    }
    return value;
}

bool is_leap(std::int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

}  // namespace

std::int64_t parse_iso8601_utc(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
        throw ParseError("timestamp not in YYYY-MM-DDTHH:MM:SSZ form: '" + std::string(text) + "'");
    }
    const unsigned year = parse_fixed_uint(text, 0, 4);
    const unsigned month = parse_fixed_uint(text, 5, 2);
    const unsigned day = parse_fixed_uint(text, 8, 2);
    const unsigned hour = parse_fixed_uint(text, 11, 2);
    const unsigned minute = parse_fixed_uint(text, 14, 2);
    const unsigned second = parse_fixed_uint(text, 17, 2);

    static constexpr unsigned days_in_month[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw ParseError("timestamp month out of range: '" + std::string(text) + "'");
    unsigned max_day = days_in_month[month - 1];
    if (month == 2 && is_leap(year)) max_day = 29;
    if (day < 1 || day > max_day) throw ParseError("timestamp day out of range: '" + std::string(text) + "'");
    if (hour > 23 || minute > 59 || second > 59) {
        throw ParseError("timestamp time out of range: '" + std::string(text) + "'");
    }
    return days_from_civil(year, month, day) * kSecondsPerDay + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601_utc(std::int64_t ts) {
    std::int64_t days = utc_day_index(ts);
    std::int64_t rem = ts - days * kSecondsPerDay;
    std::int64_t year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace lmd
