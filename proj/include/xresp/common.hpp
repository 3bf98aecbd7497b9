#pragma once

// Shared primitives: calendar dates, error types, number formatting and
// file helpers used across the library.

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace xresp {

/// Thrown when an input file violates its schema. Carries a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Inconsistent or insufficient data at computation time (mismatched days,
/// missing pairs, degenerate inputs).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter domain (bad session window, infeasible
/// generator kernel, out-of-domain model parameters).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Calendar dates
// ---------------------------------------------------------------------------

/// Calendar date; ordering is chronological field-wise comparison.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    /// Sortable integer key, e.g. 20080107.
    int key() const { return year * 10000 + month * 100 + day; }
};

inline Date parse_date(std::string_view s, std::size_t line = 0) {
    // ISO-8601: YYYY-MM-DD
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw ParseError("bad date '" + std::string(s) + "' (want YYYY-MM-DD)", line);
    Date d;
    auto num = [&](std::string_view part, int lo, int hi, const char* what) {
        int v = 0;
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || p != part.data() + part.size() || v < lo || v > hi)
            throw ParseError(std::string("bad ") + what + " in date '" + std::string(s) + "'", line);
        return v;
    };
    d.year = num(s.substr(0, 4), 1, 9999, "year");
    d.month = num(s.substr(5, 2), 1, 12, "month");
    d.day = num(s.substr(8, 2), 1, 31, "day");
    return d;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

/// Next calendar day (proleptic Gregorian); used by the synthetic generator.
inline Date next_day(Date d) {
    static constexpr int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = mdays[d.month - 1];
    bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    if (d.month == 2 && leap) dim = 29;
    if (++d.day > dim) {
        d.day = 1;
        if (++d.month > 12) {
            d.month = 1;
            ++d.year;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Numbers <-> text (locale-independent)
// ---------------------------------------------------------------------------

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[48];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

inline bool is_defined(double v) { return !std::isnan(v); }

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::string text;
    in.seekg(0, std::ios::end);
    text.resize(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(text.data(), static_cast<std::streamsize>(text.size()));
    return text;
}

/// Write-then-rename so a partial file never appears under the target name.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ConfigError("short write: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw ConfigError("rename failed for " + path.string() + ": " + ec.message());
}

}  // namespace xresp
