#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lmd {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Strict `YYYY-MM-DDTHH:MM:SSZ` (UTC, second granularity) to seconds since
// the Unix epoch. Throws ParseError on any deviation from that shape.
std::int64_t parse_iso8601_utc(std::string_view text);

std::string format_iso8601_utc(std::int64_t ts);

// Calendar day bucket used for historical edge probabilities.
inline std::int64_t utc_day_index(std::int64_t ts) {
    return ts >= 0 ? ts / kSecondsPerDay : -((-ts + kSecondsPerDay - 1) / kSecondsPerDay);
}

}  // namespace lmd
