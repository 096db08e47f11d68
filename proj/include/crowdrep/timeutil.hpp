#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "crowdrep/error.hpp"

namespace crowdrep {

using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

// Mean Gregorian year, so that "year" and "half-year" widths stay calendar-neutral.
inline constexpr Duration kYear{31556952};
inline constexpr Duration kHalfYear{kYear.count() / 2};
inline constexpr Duration kQuarter{kYear.count() / 4};
inline constexpr Duration kMonth{kYear.count() / 12};
inline constexpr Duration kWeek{7 * 86400};
inline constexpr Duration kDay{86400};

namespace detail {

inline bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    auto first = s.data() + pos;
    auto last = first + len;
    for (auto p = first; p != last; ++p)
        if (*p < '0' || *p > '9') return false;
    return std::from_chars(first, last, out).ec == std::errc{};
}

inline void append_padded(std::string& out, long long v, int width) {
    auto digits = std::to_string(v < 0 ? -v : v);
    if (v < 0) out.push_back('-');
    for (int i = static_cast<int>(digits.size()); i < width; ++i) out.push_back('0');
    out += digits;
}

} // namespace detail

/// Parses "YYYY-MM-DD HH:MM:SS", "YYYY-MM-DDTHH:MM:SS[Z]" or a bare "YYYY-MM-DD".
/// All timestamps are taken as UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);

    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!detail::parse_fixed_int(s, 0, 4, y) || !detail::parse_fixed_int(s, 5, 2, mo) ||
        !detail::parse_fixed_int(s, 8, 2, d))
        return std::nullopt;
    if (s.size() != 10) {
        if (s.size() != 19 || (s[10] != ' ' && s[10] != 'T') || s[13] != ':' || s[16] != ':')
            return std::nullopt;
        if (!detail::parse_fixed_int(s, 11, 2, h) || !detail::parse_fixed_int(s, 14, 2, mi) ||
            !detail::parse_fixed_int(s, 17, 2, sec))
            return std::nullopt;
        if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Timestamp{std::chrono::sys_days{ymd}} + std::chrono::hours{h} + std::chrono::minutes{mi} +
           std::chrono::seconds{sec};
}

/// ISO-8601 "YYYY-MM-DDTHH:MM:SS".
inline std::string format_timestamp(Timestamp ts) {
    auto days = std::chrono::floor<std::chrono::days>(ts);
    std::chrono::year_month_day ymd{days};
    std::chrono::hh_mm_ss hms{ts - days};
    std::string out;
    out.reserve(19);
    detail::append_padded(out, static_cast<int>(ymd.year()), 4);
    out.push_back('-');
    detail::append_padded(out, static_cast<unsigned>(ymd.month()), 2);
    out.push_back('-');
    detail::append_padded(out, static_cast<unsigned>(ymd.day()), 2);
    out.push_back('T');
    detail::append_padded(out, hms.hours().count(), 2);
    out.push_back(':');
    detail::append_padded(out, hms.minutes().count(), 2);
    out.push_back(':');
    detail::append_padded(out, hms.seconds().count(), 2);
    return out;
}

inline Timestamp start_of_day(Timestamp ts) {
    return Timestamp{std::chrono::floor<std::chrono::days>(ts)};
}

/// Accepts the named widths day, week, month, quarter, half-year, year, or a
/// count with unit suffix: "3600s", "12h", "30d".
inline Duration parse_interval_width(std::string_view s) {
    if (s == "day") return kDay;
    if (s == "week") return kWeek;
    if (s == "month") return kMonth;
    if (s == "quarter") return kQuarter;
    if (s == "half-year") return kHalfYear;
    if (s == "year") return kYear;
    if (s.size() >= 2) {
        std::int64_t n = 0;
        auto body = s.substr(0, s.size() - 1);
        auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), n);
        if (ec == std::errc{} && p == body.data() + body.size() && n > 0) {
            switch (s.back()) {
            case 's': return Duration{n};
            case 'h': return Duration{n * 3600};
            case 'd': return Duration{n * 86400};
            default: break;
            }
        }
    }
    throw ConfigError("unrecognised interval width '" + std::string(s) + "'");
}

/// Fixed-width partition of the system lifetime; interval 1 starts at the epoch.
struct IntervalScheme {
    std::optional<Timestamp> epoch; ///< unset: derived from the data (earliest day start)
    Duration width = kHalfYear;
};

/// 1 + floor((ts - epoch) / width).
inline std::int64_t label_of(Timestamp ts, Timestamp epoch, Duration width) {
    if (width.count() <= 0) throw ConfigError("interval width must be positive");
    if (ts < epoch)
        throw DataError("timestamp " + format_timestamp(ts) + " precedes interval epoch " +
                        format_timestamp(epoch));
    return 1 + (ts - epoch).count() / width.count();
}

inline std::int64_t label_of(Timestamp ts, const IntervalScheme& scheme) {
    if (!scheme.epoch) throw ConfigError("interval scheme has no epoch");
    return label_of(ts, *scheme.epoch, scheme.width);
}

} // namespace crowdrep
