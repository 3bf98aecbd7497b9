#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "xresp/common.hpp"

namespace xresp {

/// One trade inside a session day. `second` is the 0-based session-second
/// index; `seq` numbers trades within a second by file order, starting at 1.
struct TradeRecord {
    int second = 0;
    int seq = 1;
    double price = 0.0;
    std::int64_t volume = 0;
};

struct QuoteRecord {
    int second = 0;
    double bid = 0.0;
    double ask = 0.0;
};

struct DayTrades {
    Date day;
    std::vector<TradeRecord> trades;  // sorted by (second, seq)
};

struct DayQuotes {
    Date day;
    std::vector<QuoteRecord> quotes;  // sorted by second
};

/// Per-second midpoint prices for one day. Seconds before the first quote
/// carry NaN; from `first_defined` on, the midpoint of the most recent quote
/// is carried forward.
struct MidpointSeries {
    Date day;
    std::vector<double> values;
    int first_defined = 0;
};

enum class SignConvention { number_imbalance, volume_imbalance };

/// Aggregated per-second trade signs in {-1, 0, +1}; 0 marks both no-trade
/// seconds and balanced seconds.
struct SignSeries {
    Date day;
    std::vector<std::int8_t> values;
    SignConvention convention = SignConvention::number_imbalance;
};

/// Tick-rule sign of a single trade. 0 encodes "unset": the initial run of
/// trades at an unchanged price with no earlier reference price that day.
struct PerTradeSign {
    int second = 0;
    int seq = 1;
    std::int8_t sign = 0;
};

struct PerTradeSignSeries {
    Date day;
    std::vector<PerTradeSign> entries;  // aligned with the day's trades
};

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

}  // namespace xresp
