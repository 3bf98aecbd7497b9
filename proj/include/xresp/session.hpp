#pragma once

#include <string>
#include <string_view>

#include "xresp/common.hpp"

namespace xresp {

inline int parse_time_of_day(std::string_view s, std::size_t line = 0) {
    // HH:MM:SS
    if (s.size() != 8 || s[2] != ':' || s[5] != ':')
        throw ParseError("bad time '" + std::string(s) + "' (want HH:MM:SS)", line);
    auto num = [&](std::string_view part, int hi) {
        int v = 0;
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || p != part.data() + part.size() || v < 0 || v > hi)
            throw ParseError("bad time '" + std::string(s) + "'", line);
        return v;
    };
    int h = num(s.substr(0, 2), 23);
    int m = num(s.substr(3, 2), 59);
    int sec = num(s.substr(6, 2), 59);
    return h * 3600 + m * 60 + sec;
}

inline std::string format_time_of_day(int seconds_since_midnight) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", seconds_since_midnight / 3600,
                  (seconds_since_midnight / 60) % 60, seconds_since_midnight % 60);
    return buf;
}

/// Half-open trading session [open, close) on a one-second grid.
/// The default window spans 09:40:00 to 15:50:00 (22200 seconds).
struct SessionWindow {
    int open_second = 9 * 3600 + 40 * 60;
    int close_second = 15 * 3600 + 50 * 60;

    int length() const { return close_second - open_second; }

    /// True when a time-of-day stamp falls inside the session.
    bool contains(int time_of_day) const {
        return time_of_day >= open_second && time_of_day < close_second;
    }

    /// 0-based session-second index for an in-window stamp.
    int to_session_second(int time_of_day) const { return time_of_day - open_second; }

    void validate() const {
        if (length() <= 0) throw ConfigError("session window must have positive length");
    }
};

}  // namespace xresp
