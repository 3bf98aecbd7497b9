#pragma once

// Market response matrix: response values of all ordered stock pairs at one
// lag, normalized by the maximal absolute entry, rows and columns grouped by
// economic sector.

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xresp/ingest.hpp"
#include "xresp/response.hpp"

namespace xresp {

/// Dense normalized response matrix at a fixed lag. Entry (i, j) is
/// R_ij(tau) / max_abs; the diagonal holds self-responses. Generally
/// asymmetric. When every response vanishes, the matrix is all-zero and
/// `all_zero` is flagged instead of dividing by zero.
struct MarketResponseMatrix {
    int tau = 0;
    Convention convention = Convention::inc0;
    std::vector<std::string> symbols;  // sector-grouped order
    std::vector<std::string> sectors;  // sector of each symbol, aligned
    std::vector<double> entries;       // row-major, size n*n
    double max_abs = 0.0;
    bool all_zero = false;

    std::size_t size() const { return symbols.size(); }
    double at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
    double& at(std::size_t i, std::size_t j) { return entries[i * size() + j]; }
};

/// Order a symbol set by sector metadata: sectors ranked by first appearance
/// in the metadata, symbols keeping their metadata order within each sector.
/// Symbols absent from the metadata are an error.
inline std::vector<std::string> sector_ordered_symbols(const std::set<std::string>& present,
                                                       const SectorMeta& meta) {
    std::vector<std::string> sector_rank;
    for (const auto& [sym, sec] : meta.entries)
        if (std::find(sector_rank.begin(), sector_rank.end(), sec) == sector_rank.end())
            sector_rank.push_back(sec);

    std::vector<std::string> missing;
    for (const std::string& sym : present)
        if (!meta.sector_of(sym)) missing.push_back(sym);
    if (!missing.empty()) {
        std::string msg = "symbols missing from sector metadata:";
        for (const std::string& s : missing) msg += " " + s;
        throw DataError(msg);
    }

    std::vector<std::string> ordered;
    for (const std::string& sec : sector_rank)
        for (const auto& [sym, s] : meta.entries)
            if (s == sec && present.count(sym)) ordered.push_back(sym);
    return ordered;
}

/// Assemble the matrix at `tau` from curves covering every ordered pair,
/// self pairs included. A pair without a defined value at `tau` is a gap
/// error listing the offenders.
inline MarketResponseMatrix build_matrix(std::span<const ResponseCurve> curves, int tau,
                                         const SectorMeta& meta) {
    if (curves.empty()) throw DataError("build_matrix: no curves");
    std::map<std::pair<std::string, std::string>, double> value_at;
    std::set<std::string> present;
    Convention conv = curves.front().convention;
    for (const ResponseCurve& c : curves) {
        if (c.convention != conv) throw DataError("build_matrix: mixed conventions");
        present.insert(c.stock_i);
        present.insert(c.stock_j);
        auto it = std::find(c.lags.lags.begin(), c.lags.lags.end(), tau);
        if (it == c.lags.lags.end()) continue;
        std::size_t k = static_cast<std::size_t>(it - c.lags.lags.begin());
        if (is_defined(c.values[k])) value_at[{c.stock_i, c.stock_j}] = c.values[k];
    }

    MarketResponseMatrix m;
    m.tau = tau;
    m.convention = conv;
    m.symbols = sector_ordered_symbols(present, meta);
    for (const std::string& s : m.symbols) m.sectors.push_back(*meta.sector_of(s));

    const std::size_t n = m.symbols.size();
    std::vector<std::string> gaps;
    std::vector<double> raw(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto it = value_at.find({m.symbols[i], m.symbols[j]});
            if (it == value_at.end()) {
                gaps.push_back(m.symbols[i] + ":" + m.symbols[j]);
                continue;
            }
            raw[i * n + j] = it->second;
        }
    }
    if (!gaps.empty()) {
        std::string msg = "build_matrix: no defined response at tau=" + std::to_string(tau) +
                          " for pairs:";
        for (const std::string& g : gaps) msg += " " + g;
        throw DataError(msg);
    }

    double max_abs = 0.0;
    for (double v : raw) max_abs = std::max(max_abs, std::fabs(v));
    m.max_abs = max_abs;
    m.entries.assign(n * n, 0.0);
    if (max_abs > 0.0) {
        for (std::size_t k = 0; k < raw.size(); ++k) m.entries[k] = raw[k] / max_abs;
    } else {
        m.all_zero = true;
    }
    return m;
}

}  // namespace xresp
