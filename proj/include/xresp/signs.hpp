#pragma once

// Tick-rule trade sign classification, per-second aggregation by number or
// volume imbalance, accuracy evaluation against reference labels, and
// sign persistence across no-trade gaps.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "xresp/csv.hpp"
#include "xresp/records.hpp"
#include "xresp/session.hpp"

namespace xresp {

inline std::int8_t sgn(double x) { return x > 0 ? std::int8_t{1} : (x < 0 ? std::int8_t{-1} : std::int8_t{0}); }
inline std::int8_t sgn(std::int64_t x) { return x > 0 ? std::int8_t{1} : (x < 0 ? std::int8_t{-1} : std::int8_t{0}); }

// ---------------------------------------------------------------------------
// Per-trade classification
// ---------------------------------------------------------------------------

/// Tick rule across one day: the sign of the price change between consecutive
/// trades, inheriting the previous sign when the price is unchanged. The
/// comparison spans second boundaries but never crosses days, so the first
/// trades of a day stay unset until the first price change.
inline PerTradeSignSeries classify_per_trade(const DayTrades& day) {
    PerTradeSignSeries out;
    out.day = day.day;
    out.entries.reserve(day.trades.size());
    double prev_price = 0.0;
    std::int8_t prev_sign = 0;  // 0 = unset
    bool have_prev = false;
    for (const TradeRecord& t : day.trades) {
        std::int8_t s;
        if (!have_prev) {
            s = 0;
            have_prev = true;
        } else if (t.price != prev_price) {
            s = sgn(t.price - prev_price);
        } else {
            s = prev_sign;
        }
        out.entries.push_back({t.second, t.seq, s});
        prev_price = t.price;
        prev_sign = s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-second aggregation
// ---------------------------------------------------------------------------

/// Sign of the number imbalance: sgn of the per-second sum of trade signs,
/// 0 for seconds without trades. Unset per-trade signs contribute 0.
inline SignSeries aggregate_number(const PerTradeSignSeries& per_trade,
                                   const SessionWindow& window) {
    SignSeries out;
    out.day = per_trade.day;
    out.convention = SignConvention::number_imbalance;
    out.values.assign(static_cast<std::size_t>(window.length()), 0);
    std::vector<std::int64_t> sums(static_cast<std::size_t>(window.length()), 0);
    std::vector<bool> traded(static_cast<std::size_t>(window.length()), false);
    for (const PerTradeSign& e : per_trade.entries) {
        sums[static_cast<std::size_t>(e.second)] += e.sign;
        traded[static_cast<std::size_t>(e.second)] = true;
    }
    for (std::size_t t = 0; t < sums.size(); ++t)
        out.values[t] = traded[t] ? sgn(sums[t]) : std::int8_t{0};
    return out;
}

/// Sign of the volume imbalance: sgn of the volume-weighted per-second sum.
inline SignSeries aggregate_volume(const PerTradeSignSeries& per_trade, const DayTrades& day,
                                   const SessionWindow& window) {
    if (per_trade.entries.size() != day.trades.size() || per_trade.day != day.day)
        throw DataError("aggregate_volume: sign series does not match trades");
    SignSeries out;
    out.day = per_trade.day;
    out.convention = SignConvention::volume_imbalance;
    out.values.assign(static_cast<std::size_t>(window.length()), 0);
    std::vector<std::int64_t> sums(static_cast<std::size_t>(window.length()), 0);
    std::vector<bool> traded(static_cast<std::size_t>(window.length()), false);
    for (std::size_t i = 0; i < per_trade.entries.size(); ++i) {
        const PerTradeSign& e = per_trade.entries[i];
        sums[static_cast<std::size_t>(e.second)] += std::int64_t{e.sign} * day.trades[i].volume;
        traded[static_cast<std::size_t>(e.second)] = true;
    }
    for (std::size_t t = 0; t < sums.size(); ++t)
        out.values[t] = traded[t] ? sgn(sums[t]) : std::int8_t{0};
    return out;
}

// ---------------------------------------------------------------------------
// Reference labels
// ---------------------------------------------------------------------------

/// Parse a labeled-sign CSV (`day,time,seq,sign`, sign in {B,S}). The file
/// covers the identified trades only; hidden trades are simply absent.
inline std::vector<PerTradeSignSeries> parse_reference_signs(std::string_view csv,
                                                             const SessionWindow& window) {
    window.validate();
    CsvScanner scan(csv);
    expect_header(scan, {"day", "time", "seq", "sign"}, "reference signs");
    std::map<Date, PerTradeSignSeries> by_day;
    while (scan.next_line()) {
        Date day = parse_date(scan.next_field(), scan.line_number());
        int tod = parse_time_of_day(scan.next_field(), scan.line_number());
        int seq = static_cast<int>(scan.parse_int(scan.next_field(), "seq"));
        std::string_view sign = scan.next_field();
        scan.expect_end_of_line();
        if (seq < 1) throw ParseError("seq must be >= 1", scan.line_number());
        std::int8_t s;
        if (sign == "B") s = 1;
        else if (sign == "S") s = -1;
        else throw ParseError("sign must be B or S, got '" + std::string(sign) + "'",
                              scan.line_number());
        if (!window.contains(tod)) continue;
        PerTradeSignSeries& ser = by_day[day];
        ser.day = day;
        ser.entries.push_back({window.to_session_second(tod), seq, s});
    }
    std::vector<PerTradeSignSeries> out;
    out.reserve(by_day.size());
    for (auto& [day, ser] : by_day) out.push_back(std::move(ser));
    return out;
}

/// Aggregate reference labels (a subset of the day's trades: the identified
/// ones) to per-second series under both conventions. Volumes come from the
/// matching trade records; a label without a matching trade is a consistency
/// error.
struct ReferenceAggregates {
    SignSeries number;
    SignSeries volume;
};

inline ReferenceAggregates aggregate_reference(const PerTradeSignSeries& reference,
                                               const DayTrades& day,
                                               const SessionWindow& window) {
    if (reference.day != day.day) throw DataError("aggregate_reference: day mismatch");
    std::map<std::pair<int, int>, std::int64_t> volume_of;
    for (const TradeRecord& t : day.trades) volume_of[{t.second, t.seq}] = t.volume;

    ReferenceAggregates out;
    out.number.day = reference.day;
    out.number.convention = SignConvention::number_imbalance;
    out.number.values.assign(static_cast<std::size_t>(window.length()), 0);
    out.volume.day = reference.day;
    out.volume.convention = SignConvention::volume_imbalance;
    out.volume.values.assign(static_cast<std::size_t>(window.length()), 0);

    std::vector<std::int64_t> nsum(static_cast<std::size_t>(window.length()), 0);
    std::vector<std::int64_t> vsum(static_cast<std::size_t>(window.length()), 0);
    std::vector<bool> traded(static_cast<std::size_t>(window.length()), false);
    for (const PerTradeSign& e : reference.entries) {
        auto it = volume_of.find({e.second, e.seq});
        if (it == volume_of.end())
            throw DataError("reference trade " + format_date(reference.day) + " second " +
                            std::to_string(e.second) + " seq " + std::to_string(e.seq) +
                            " not present in trades");
        nsum[static_cast<std::size_t>(e.second)] += e.sign;
        vsum[static_cast<std::size_t>(e.second)] += std::int64_t{e.sign} * it->second;
        traded[static_cast<std::size_t>(e.second)] = true;
    }
    for (std::size_t t = 0; t < nsum.size(); ++t) {
        if (!traded[t]) continue;
        out.number.values[t] = sgn(nsum[t]);
        out.volume.values[t] = sgn(vsum[t]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Accuracy
// ---------------------------------------------------------------------------

struct AccuracyReport {
    std::int64_t n_identified = 0;
    std::int64_t n_matches = 0;
    double accuracy = 0.0;  // n_matches / n_identified
    std::int64_t n_zero_signs = 0;       // zeros in the compared series (per-second only)
    std::int64_t excluded_all_zero = 0;  // seconds zero in every convention (per-second only)
};

/// Per-trade accuracy: over reference keys whose theoretical sign is set,
/// the fraction with equal signs. A reference key with no matching trade is
/// a consistency error.
inline AccuracyReport accuracy_per_trade(std::span<const PerTradeSignSeries> theoretical,
                                         std::span<const PerTradeSignSeries> reference) {
    std::map<Date, const PerTradeSignSeries*> theo_by_day;
    for (const PerTradeSignSeries& s : theoretical) theo_by_day[s.day] = &s;

    AccuracyReport rep;
    for (const PerTradeSignSeries& ref : reference) {
        auto it = theo_by_day.find(ref.day);
        if (it == theo_by_day.end())
            throw DataError("reference day " + format_date(ref.day) + " not present in trades");
        // Index theoretical entries by (second, seq).
        std::map<std::pair<int, int>, std::int8_t> theo;
        for (const PerTradeSign& e : it->second->entries) theo[{e.second, e.seq}] = e.sign;
        for (const PerTradeSign& r : ref.entries) {
            auto te = theo.find({r.second, r.seq});
            if (te == theo.end())
                throw DataError("reference trade " + format_date(ref.day) + " second " +
                                std::to_string(r.second) + " seq " + std::to_string(r.seq) +
                                " not present in trades");
            if (te->second == 0) continue;  // unset: not an identified theoretical sign
            ++rep.n_identified;
            if (te->second == r.sign) ++rep.n_matches;
        }
    }
    rep.accuracy = rep.n_identified > 0
                       ? static_cast<double>(rep.n_matches) / static_cast<double>(rep.n_identified)
                       : 0.0;
    return rep;
}

struct PerSecondAccuracy {
    AccuracyReport vs_number;  // against the number-imbalance reference
    AccuracyReport vs_volume;  // against the volume-imbalance reference
    std::int64_t n_zero_theoretical = 0;
};

/// Per-second accuracy over the identified trading time: seconds where the
/// theoretical and both reference signs are simultaneously zero are excluded
/// before counting. Zero-sign totals are reported over the full session.
inline PerSecondAccuracy accuracy_per_second(std::span<const SignSeries> theoretical,
                                             std::span<const SignSeries> reference_number,
                                             std::span<const SignSeries> reference_volume) {
    if (theoretical.size() != reference_number.size() ||
        theoretical.size() != reference_volume.size())
        throw DataError("accuracy_per_second: day count mismatch");
    PerSecondAccuracy rep;
    for (std::size_t d = 0; d < theoretical.size(); ++d) {
        const SignSeries& theo = theoretical[d];
        const SignSeries& rn = reference_number[d];
        const SignSeries& rv = reference_volume[d];
        if (theo.day != rn.day || theo.day != rv.day)
            throw DataError("accuracy_per_second: day mismatch");
        if (theo.values.size() != rn.values.size() || theo.values.size() != rv.values.size())
            throw DataError("accuracy_per_second: series length mismatch");
        for (std::size_t t = 0; t < theo.values.size(); ++t) {
            std::int8_t a = theo.values[t], b = rn.values[t], c = rv.values[t];
            if (a == 0) ++rep.n_zero_theoretical;
            if (b == 0) ++rep.vs_number.n_zero_signs;
            if (c == 0) ++rep.vs_volume.n_zero_signs;
            if (a == 0 && b == 0 && c == 0) {
                ++rep.vs_number.excluded_all_zero;
                ++rep.vs_volume.excluded_all_zero;
                continue;
            }
            ++rep.vs_number.n_identified;
            ++rep.vs_volume.n_identified;
            if (a == b) ++rep.vs_number.n_matches;
            if (a == c) ++rep.vs_volume.n_matches;
        }
    }
    auto finish = [](AccuracyReport& r) {
        r.accuracy = r.n_identified > 0
                         ? static_cast<double>(r.n_matches) / static_cast<double>(r.n_identified)
                         : 0.0;
    };
    finish(rep.vs_number);
    finish(rep.vs_volume);
    return rep;
}

// ---------------------------------------------------------------------------
// Sign persistence across no-trade gaps
// ---------------------------------------------------------------------------

/// Same/different sign statistics across maximal zero runs. Bin tau0 counts
/// runs of exactly tau0 zero seconds bounded by nonzero signs within one day.
struct GapPersistence {
    std::vector<std::int64_t> same_count;  // index = tau0; [0] unused
    std::vector<std::int64_t> diff_count;

    std::int64_t total(std::size_t tau0) const {
        return tau0 < same_count.size() ? same_count[tau0] + diff_count[tau0] : 0;
    }
    bool populated(std::size_t tau0) const { return total(tau0) > 0; }
    double p_same(std::size_t tau0) const {
        std::int64_t n = total(tau0);
        return n > 0 ? static_cast<double>(same_count[tau0]) / static_cast<double>(n) : kUndefined;
    }
    double p_diff(std::size_t tau0) const {
        std::int64_t n = total(tau0);
        return n > 0 ? static_cast<double>(diff_count[tau0]) / static_cast<double>(n) : kUndefined;
    }

    /// Merge another accumulation (associative, per-bin addition).
    void merge(const GapPersistence& other) {
        if (other.same_count.size() > same_count.size()) {
            same_count.resize(other.same_count.size(), 0);
            diff_count.resize(other.diff_count.size(), 0);
        }
        for (std::size_t i = 0; i < other.same_count.size(); ++i) {
            same_count[i] += other.same_count[i];
            diff_count[i] += other.diff_count[i];
        }
    }
};

inline GapPersistence gap_persistence(std::span<const SignSeries> series) {
    GapPersistence out;
    for (const SignSeries& s : series) {
        if (s.convention != SignConvention::number_imbalance)
            throw DataError("gap_persistence expects number-imbalance sign series");
        std::int8_t prev = 0;
        std::size_t gap = 0;
        bool have_prev = false;
        for (std::int8_t v : s.values) {
            if (v == 0) {
                if (have_prev) ++gap;
                continue;
            }
            if (have_prev && gap > 0) {
                if (gap + 1 > out.same_count.size()) {
                    out.same_count.resize(gap + 1, 0);
                    out.diff_count.resize(gap + 1, 0);
                }
                if (v == prev) ++out.same_count[gap];
                else ++out.diff_count[gap];
            }
            prev = v;
            have_prev = true;
            gap = 0;
        }
    }
    return out;
}

}  // namespace xresp
