#pragma once

// Pipeline assembly: load a stock's trades-and-quotes files, derive midpoints
// and sign series, and align stock pairs on their common trading days.

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "xresp/ingest.hpp"
#include "xresp/response.hpp"
#include "xresp/signs.hpp"

namespace xresp {

/// Everything derived from one stock's input files, aligned by active day
/// (days with at least one trade and one quote in-window).
struct StockData {
    std::string symbol;
    std::vector<Date> days;
    std::vector<DayTrades> trades;
    std::vector<PerTradeSignSeries> per_trade_signs;
    std::vector<MidpointSeries> midpoints;
    std::vector<SignSeries> signs_number;
    std::vector<SignSeries> signs_volume;
};

inline std::filesystem::path trades_path(const std::filesystem::path& dir,
                                         const std::string& symbol) {
    return dir / (symbol + ".trades.csv");
}
inline std::filesystem::path quotes_path(const std::filesystem::path& dir,
                                         const std::string& symbol) {
    return dir / (symbol + ".quotes.csv");
}
inline std::filesystem::path reference_path(const std::filesystem::path& dir,
                                            const std::string& symbol) {
    return dir / (symbol + ".reference.csv");
}

inline StockData build_stock_data(std::string symbol, std::vector<DayTrades> trades,
                                  std::vector<DayQuotes> quotes, const SessionWindow& window) {
    StockData stock;
    stock.symbol = std::move(symbol);
    stock.days = active_days(trades, quotes);

    std::map<Date, DayTrades*> trades_by_day;
    for (DayTrades& d : trades) trades_by_day[d.day] = &d;
    std::map<Date, DayQuotes*> quotes_by_day;
    for (DayQuotes& d : quotes) quotes_by_day[d.day] = &d;

    for (const Date& day : stock.days) {
        DayTrades& dt = *trades_by_day.at(day);
        stock.midpoints.push_back(build_midpoints(*quotes_by_day.at(day), window));
        PerTradeSignSeries per_trade = classify_per_trade(dt);
        stock.signs_number.push_back(aggregate_number(per_trade, window));
        stock.signs_volume.push_back(aggregate_volume(per_trade, dt, window));
        stock.per_trade_signs.push_back(std::move(per_trade));
        stock.trades.push_back(std::move(dt));
    }
    return stock;
}

inline StockData load_stock(const std::filesystem::path& dir, const std::string& symbol,
                            const SessionWindow& window) {
    std::string trades_csv = read_file(trades_path(dir, symbol));
    std::string quotes_csv = read_file(quotes_path(dir, symbol));
    return build_stock_data(symbol, parse_trades(trades_csv, window),
                            parse_quotes(quotes_csv, window), window);
}

/// Day-aligned series views of a stock pair over their common trading days.
struct AlignedPair {
    std::vector<Date> days;
    std::vector<const MidpointSeries*> mids_i;
    std::vector<const SignSeries*> signs_i;  // i's own signs (for self terms)
    std::vector<const SignSeries*> signs_j;
};

inline AlignedPair align_pair(const StockData& i, const StockData& j,
                              SignConvention convention = SignConvention::number_imbalance) {
    AlignedPair out;
    out.days = common_days(i.days, j.days);
    auto index_of = [](const StockData& s, const Date& day) {
        auto it = std::lower_bound(s.days.begin(), s.days.end(), day);
        return static_cast<std::size_t>(it - s.days.begin());
    };
    for (const Date& day : out.days) {
        std::size_t ii = index_of(i, day);
        std::size_t jj = index_of(j, day);
        out.mids_i.push_back(&i.midpoints[ii]);
        const auto& si = convention == SignConvention::number_imbalance ? i.signs_number
                                                                        : i.signs_volume;
        const auto& sj = convention == SignConvention::number_imbalance ? j.signs_number
                                                                        : j.signs_volume;
        out.signs_i.push_back(&si[ii]);
        out.signs_j.push_back(&sj[jj]);
    }
    return out;
}

inline ResponseCurve pair_response(const StockData& i, const StockData& j, const LagGrid& grid,
                                   Convention conv) {
    AlignedPair a = align_pair(i, j);
    ResponseCurve c = response(std::span<const MidpointSeries* const>(a.mids_i),
                               std::span<const SignSeries* const>(a.signs_j), grid, conv);
    c.stock_i = i.symbol;
    c.stock_j = j.symbol;
    return c;
}

inline ResponseCurve pair_correlator(const StockData& i, const StockData& j, const LagGrid& grid,
                                     Convention conv,
                                     ZeroPolicy policy = ZeroPolicy::condition_on_j) {
    AlignedPair a = align_pair(i, j);
    ResponseCurve c = sign_correlator(std::span<const SignSeries* const>(a.signs_i),
                                      std::span<const SignSeries* const>(a.signs_j), grid, conv,
                                      policy);
    c.stock_i = i.symbol;
    c.stock_j = j.symbol;
    return c;
}

}  // namespace xresp
