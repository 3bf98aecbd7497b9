#pragma once

// Tabular output formats. All floats are written in shortest round-trip form
// with a dot decimal separator; all writes go through a temp-file rename.

#include <filesystem>
#include <string>

#include "json.hpp"  // vendored nlohmann/json

#include "xresp/fit.hpp"
#include "xresp/histogram.hpp"
#include "xresp/matrix.hpp"
#include "xresp/noise.hpp"
#include "xresp/response.hpp"
#include "xresp/signs.hpp"

namespace xresp {

// ---------------------------------------------------------------------------
// Curves: tau,value,count,stderr
// ---------------------------------------------------------------------------

inline std::string curve_to_csv(const ResponseCurve& curve) {
    std::string out = "tau,value,count,stderr\n";
    for (std::size_t k = 0; k < curve.lags.size(); ++k) {
        out += std::to_string(curve.lags.lags[k]);
        out += ',';
        out += format_double(curve.values[k]);
        out += ',';
        out += std::to_string(curve.counts[k]);
        out += ',';
        out += format_double(curve.stderrs[k]);
        out += '\n';
    }
    return out;
}

/// Read back a curve CSV (kind/convention/pair metadata are not part of the
/// format; the caller sets them if needed).
inline ResponseCurve curve_from_csv(std::string_view text) {
    CsvScanner scan(text);
    expect_header(scan, {"tau", "value", "count", "stderr"}, "curve");
    ResponseCurve curve;
    std::vector<int> lags;
    while (scan.next_line()) {
        lags.push_back(static_cast<int>(scan.parse_int(scan.next_field(), "tau")));
        curve.values.push_back(scan.parse_double(scan.next_field(), "value"));
        curve.counts.push_back(scan.parse_int(scan.next_field(), "count"));
        curve.stderrs.push_back(scan.parse_double(scan.next_field(), "stderr"));
        scan.expect_end_of_line();
    }
    curve.lags = LagGrid(std::move(lags));
    curve.sums.resize(curve.values.size(), kUndefined);
    return curve;
}

// ---------------------------------------------------------------------------
// Sign series: day,time,sign
// ---------------------------------------------------------------------------

inline std::string sign_series_to_csv(std::span<const SignSeries> series,
                                      const SessionWindow& window) {
    std::string out = "day,time,sign\n";
    for (const SignSeries& s : series) {
        std::string day = format_date(s.day);
        for (std::size_t t = 0; t < s.values.size(); ++t) {
            out += day;
            out += ',';
            out += format_time_of_day(window.open_second + static_cast<int>(t));
            out += ',';
            out += std::to_string(static_cast<int>(s.values[t]));
            out += '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Histogram: bin_left,bin_right,density
// ---------------------------------------------------------------------------

inline std::string histogram_to_csv(const SignedReturnHistogram& h) {
    std::string out = "bin_left,bin_right,density\n";
    for (std::size_t k = 0; k < h.density.size(); ++k) {
        out += format_double(h.bin_edges[k]);
        out += ',';
        out += format_double(h.bin_edges[k + 1]);
        out += ',';
        out += format_double(h.density[k]);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Noise: tau,nu,n_odd,n_even
// ---------------------------------------------------------------------------

inline std::string noise_to_csv(const NoiseCurve& c) {
    std::string out = "tau,nu,n_odd,n_even\n";
    for (std::size_t k = 0; k < c.lags.size(); ++k) {
        out += std::to_string(c.lags.lags[k]);
        out += ',';
        out += format_double(c.nu[k]);
        out += ',';
        out += std::to_string(c.n_days_odd);
        out += ',';
        out += std::to_string(c.n_days_even);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix: dense CSV with symbol labels, or JSON
// ---------------------------------------------------------------------------

inline std::string matrix_to_csv(const MarketResponseMatrix& m) {
    std::string out = "symbol";
    for (const std::string& s : m.symbols) {
        out += ',';
        out += s;
    }
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += m.symbols[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += ',';
            out += format_double(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

/// Inverse of matrix_to_csv; restores symbols and entries bit-exactly.
/// Sector labels and the normalizer are not part of the CSV format.
inline MarketResponseMatrix matrix_from_csv(std::string_view text) {
    CsvScanner scan(text);
    if (!scan.next_line()) throw ParseError("empty matrix file", 1);
    MarketResponseMatrix m;
    {
        std::string_view header = scan.line();
        std::size_t pos = 0;
        bool first = true;
        while (pos <= header.size()) {
            std::size_t comma = header.find(',', pos);
            std::string_view f = (comma == std::string_view::npos)
                                     ? header.substr(pos)
                                     : header.substr(pos, comma - pos);
            if (first) {
                if (f != "symbol")
                    throw ParseError("matrix header must start with 'symbol'", 1);
                first = false;
            } else {
                m.symbols.emplace_back(f);
            }
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    if (m.symbols.empty()) throw ParseError("matrix header lists no symbols", 1);
    std::size_t n = m.symbols.size();
    m.entries.assign(n * n, 0.0);
    std::size_t row = 0;
    while (scan.next_line()) {
        if (row >= n) throw ParseError("matrix has more rows than symbols", scan.line_number());
        std::string_view label = scan.next_field();
        if (label != m.symbols[row])
            throw ParseError("matrix row label mismatch: expected " + m.symbols[row],
                             scan.line_number());
        for (std::size_t j = 0; j < n; ++j)
            m.entries[row * n + j] = scan.parse_double(scan.next_field(), "entry");
        scan.expect_end_of_line();
        ++row;
    }
    if (row != n) throw ParseError("matrix has fewer rows than symbols", scan.line_number());
    double max_abs = 0.0;
    for (double v : m.entries) max_abs = std::max(max_abs, std::fabs(v));
    m.all_zero = max_abs == 0.0;
    m.max_abs = kUndefined;  // the raw normalizer is not recoverable from ratios
    return m;
}

inline std::string matrix_to_json(const MarketResponseMatrix& m) {
    nlohmann::json j;
    j["tau"] = m.tau;
    j["convention"] = to_string(m.convention);
    j["symbols"] = m.symbols;
    j["sectors"] = m.sectors;
    j["max_abs"] = m.max_abs;
    j["all_zero"] = m.all_zero;
    j["entries"] = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t jj = 0; jj < m.size(); ++jj) row.push_back(m.at(i, jj));
        j["entries"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Fit report JSON
// ---------------------------------------------------------------------------

inline std::string fit_to_json(const PowerLawFit& fit) {
    nlohmann::json j;
    j["theta"] = fit.theta;
    j["tau0_seconds"] = fit.tau0;
    j["gamma"] = fit.gamma;
    j["chi2"] = fit.chi2;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["n_points"] = fit.n_points;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Accuracy report JSON
// ---------------------------------------------------------------------------

inline nlohmann::json accuracy_to_json(const AccuracyReport& r) {
    nlohmann::json j;
    j["n_identified"] = r.n_identified;
    j["n_matches"] = r.n_matches;
    j["accuracy"] = r.accuracy;
    j["n_zero_signs"] = r.n_zero_signs;
    j["excluded_all_zero"] = r.excluded_all_zero;
    return j;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    atomic_write_file(path, content);
}

}  // namespace xresp
