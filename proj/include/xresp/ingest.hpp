#pragma once

// Trades-and-quotes ingestion: CSV parsing with session windowing, per-second
// midpoint construction, common trading day intersection and sector metadata.

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xresp/csv.hpp"
#include "xresp/records.hpp"
#include "xresp/session.hpp"

namespace xresp {

// ---------------------------------------------------------------------------
// Trades
// ---------------------------------------------------------------------------

/// Parse a trades CSV (`day,time,price,volume`). Rows outside the session
/// window are dropped; the survivors of each day must have non-decreasing
/// seconds in file order, and get `seq` assigned 1..k within each second.
inline std::vector<DayTrades> parse_trades(std::string_view csv, const SessionWindow& window) {
    window.validate();
    CsvScanner scan(csv);
    expect_header(scan, {"day", "time", "price", "volume"}, "trades");

    std::map<Date, DayTrades> by_day;
    while (scan.next_line()) {
        Date day = parse_date(scan.next_field(), scan.line_number());
        int tod = parse_time_of_day(scan.next_field(), scan.line_number());
        double price = scan.parse_double(scan.next_field(), "price");
        std::int64_t volume = scan.parse_int(scan.next_field(), "volume");
        scan.expect_end_of_line();
        if (!(price > 0.0))
            throw ParseError("price must be > 0, got " + format_double(price), scan.line_number());
        if (volume < 1)
            throw ParseError("volume must be >= 1, got " + std::to_string(volume),
                             scan.line_number());
        if (!window.contains(tod)) continue;

        DayTrades& dt = by_day[day];
        dt.day = day;
        int second = window.to_session_second(tod);
        if (!dt.trades.empty()) {
            int last = dt.trades.back().second;
            if (second < last)
                throw ParseError("non-monotone trade time within day " + format_date(day),
                                 scan.line_number());
        }
        int seq = (!dt.trades.empty() && dt.trades.back().second == second)
                      ? dt.trades.back().seq + 1
                      : 1;
        dt.trades.push_back({second, seq, price, volume});
    }

    std::vector<DayTrades> out;
    out.reserve(by_day.size());
    for (auto& [day, dt] : by_day) out.push_back(std::move(dt));
    return out;
}

inline std::string serialize_trades(std::span<const DayTrades> days, const SessionWindow& window) {
    std::string out = "day,time,price,volume\n";
    for (const DayTrades& dt : days) {
        std::string day = format_date(dt.day);
        for (const TradeRecord& t : dt.trades) {
            out += day;
            out += ',';
            out += format_time_of_day(window.open_second + t.second);
            out += ',';
            out += format_double(t.price);
            out += ',';
            out += std::to_string(t.volume);
            out += '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quotes
// ---------------------------------------------------------------------------

inline std::vector<DayQuotes> parse_quotes(std::string_view csv, const SessionWindow& window) {
    window.validate();
    CsvScanner scan(csv);
    expect_header(scan, {"day", "time", "bid", "ask"}, "quotes");

    std::map<Date, DayQuotes> by_day;
    while (scan.next_line()) {
        Date day = parse_date(scan.next_field(), scan.line_number());
        int tod = parse_time_of_day(scan.next_field(), scan.line_number());
        double bid = scan.parse_double(scan.next_field(), "bid");
        double ask = scan.parse_double(scan.next_field(), "ask");
        scan.expect_end_of_line();
        if (!(bid > 0.0))
            throw ParseError("bid must be > 0, got " + format_double(bid), scan.line_number());
        if (ask < bid)
            throw ParseError("crossed quote: ask " + format_double(ask) + " < bid " +
                                 format_double(bid),
                             scan.line_number());
        if (!window.contains(tod)) continue;

        DayQuotes& dq = by_day[day];
        dq.day = day;
        int second = window.to_session_second(tod);
        if (!dq.quotes.empty() && second < dq.quotes.back().second)
            throw ParseError("non-monotone quote time within day " + format_date(day),
                             scan.line_number());
        dq.quotes.push_back({second, bid, ask});
    }

    std::vector<DayQuotes> out;
    out.reserve(by_day.size());
    for (auto& [day, dq] : by_day) out.push_back(std::move(dq));
    return out;
}

inline std::string serialize_quotes(std::span<const DayQuotes> days, const SessionWindow& window) {
    std::string out = "day,time,bid,ask\n";
    for (const DayQuotes& dq : days) {
        std::string day = format_date(dq.day);
        for (const QuoteRecord& q : dq.quotes) {
            out += day;
            out += ',';
            out += format_time_of_day(window.open_second + q.second);
            out += ',';
            out += format_double(q.bid);
            out += ',';
            out += format_double(q.ask);
            out += '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Midpoints
// ---------------------------------------------------------------------------

/// Per-second midpoints with carry-forward: m(t) is (bid+ask)/2 of the last
/// quote at or before t. If several quotes share a second, the last one wins.
inline MidpointSeries build_midpoints(const DayQuotes& quotes, const SessionWindow& window) {
    if (quotes.quotes.empty())
        throw DataError("build_midpoints: no quotes for day " + format_date(quotes.day));
    MidpointSeries m;
    m.day = quotes.day;
    m.values.assign(static_cast<std::size_t>(window.length()), kUndefined);
    m.first_defined = quotes.quotes.front().second;

    std::size_t qi = 0;
    double current = kUndefined;
    for (int t = m.first_defined; t < window.length(); ++t) {
        while (qi < quotes.quotes.size() && quotes.quotes[qi].second <= t) {
            current = (quotes.quotes[qi].bid + quotes.quotes[qi].ask) / 2.0;
            ++qi;
        }
        m.values[static_cast<std::size_t>(t)] = current;
    }
    return m;
}

/// Batch form; days without quotes are skipped with a warning.
inline std::vector<MidpointSeries> build_midpoints(std::span<const DayQuotes> days,
                                                   const SessionWindow& window,
                                                   std::vector<std::string>* warnings = nullptr) {
    std::vector<MidpointSeries> out;
    out.reserve(days.size());
    for (const DayQuotes& dq : days) {
        if (dq.quotes.empty()) {
            if (warnings)
                warnings->push_back("skipping day " + format_date(dq.day) + ": no quotes");
            continue;
        }
        out.push_back(build_midpoints(dq, window));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Common trading days
// ---------------------------------------------------------------------------

/// Ascending intersection of two day lists. Throws when empty.
inline std::vector<Date> common_days(std::span<const Date> a, std::span<const Date> b) {
    std::vector<Date> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<Date> out;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw DataError("no common trading days");
    return out;
}

/// Days on which a stock actually traded: at least one trade and one quote
/// inside the window.
inline std::vector<Date> active_days(std::span<const DayTrades> trades,
                                     std::span<const DayQuotes> quotes) {
    std::vector<Date> t, q;
    for (const DayTrades& d : trades)
        if (!d.trades.empty()) t.push_back(d.day);
    for (const DayQuotes& d : quotes)
        if (!d.quotes.empty()) q.push_back(d.day);
    std::sort(t.begin(), t.end());
    std::sort(q.begin(), q.end());
    std::vector<Date> out;
    std::set_intersection(t.begin(), t.end(), q.begin(), q.end(), std::back_inserter(out));
    return out;
}

// ---------------------------------------------------------------------------
// Sector metadata
// ---------------------------------------------------------------------------

/// Symbol-to-sector listing. File order is meaningful: sectors are ranked by
/// first appearance and symbols keep their in-sector file order, so a file
/// grouped by sector reproduces its own layout.
struct SectorMeta {
    std::vector<std::pair<std::string, std::string>> entries;  // (symbol, sector)

    const std::string* sector_of(const std::string& symbol) const {
        for (const auto& [sym, sec] : entries)
            if (sym == symbol) return &sec;
        return nullptr;
    }
};

/// Accepts the CSV form (`symbol,sector` with header) or a TOML-style listing
/// of `SYMBOL = "sector"` lines.
inline SectorMeta load_sector_meta(std::string_view text) {
    SectorMeta meta;
    CsvScanner scan(text);
    bool first = true;
    bool toml = false;
    while (scan.next_line()) {
        std::string_view line = scan.line();
        if (first) {
            first = false;
            if (line.find('=') != std::string_view::npos) toml = true;
            else if (line == "symbol,sector") continue;  // CSV header
            else if (line.find(',') == std::string_view::npos)
                throw ParseError("sector metadata: expected 'symbol,sector' header or TOML lines",
                                 scan.line_number());
        }
        if (toml) {
            if (line.front() == '#' || line.front() == '[') continue;
            std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("sector metadata: expected 'SYMBOL = \"sector\"'",
                                 scan.line_number());
            auto trim = [](std::string_view v) {
                while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
                while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
                return v;
            };
            std::string_view sym = trim(line.substr(0, eq));
            std::string_view sec = trim(line.substr(eq + 1));
            if (sec.size() >= 2 && sec.front() == '"' && sec.back() == '"')
                sec = sec.substr(1, sec.size() - 2);
            if (sym.empty() || sec.empty())
                throw ParseError("sector metadata: empty symbol or sector", scan.line_number());
            meta.entries.emplace_back(std::string(sym), std::string(sec));
        } else {
            std::string_view sym = scan.next_field();
            std::string_view sec = scan.next_field();
            scan.expect_end_of_line();
            if (sym.empty() || sec.empty())
                throw ParseError("sector metadata: empty symbol or sector", scan.line_number());
            meta.entries.emplace_back(std::string(sym), std::string(sec));
        }
    }
    if (meta.entries.empty()) throw DataError("sector metadata is empty");
    return meta;
}

}  // namespace xresp
