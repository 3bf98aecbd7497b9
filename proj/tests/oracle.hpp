#pragma once

// Brute-force oracles for the curve estimators: literal loop translations of
// the definitions, written against the raw series only. They share no
// accumulation code with the library; agreement is checked bitwise on the
// per-lag sums (modulo the sign of zero) in the test suites.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xresp/records.hpp"
#include "xresp/response.hpp"

namespace oracle {

using xresp::Convention;
using xresp::Date;
using xresp::LagGrid;
using xresp::MidpointSeries;
using xresp::SignSeries;
using xresp::ZeroPolicy;

struct Curve {
    std::vector<double> values;
    std::vector<double> sums;
    std::vector<std::int64_t> counts;
};

inline bool bits_equal_or_both_zero(double a, double b) {
    if (a == 0.0 && b == 0.0) return true;  // tolerate the sign of zero
    std::uint64_t ua, ub;
    std::memcpy(&ua, &a, 8);
    std::memcpy(&ub, &b, 8);
    return ua == ub;
}

// Direct evaluation of the response definition: average over all (day, t) of
// r_i(t,tau) * eps_j(t), every zero-sign product included under inc0.
inline Curve response(std::span<const MidpointSeries* const> mids,
                      std::span<const SignSeries* const> signs, const LagGrid& grid,
                      Convention conv) {
    Curve out;
    for (int tau : grid.lags) {
        double sum = 0.0;
        std::int64_t n = 0;
        for (std::size_t d = 0; d < mids.size(); ++d) {
            const MidpointSeries& m = *mids[d];
            const SignSeries& e = *signs[d];
            int T = static_cast<int>(m.values.size());
            for (int t = 0; t + tau < T; ++t) {
                double a = m.values[static_cast<std::size_t>(t)];
                double b = m.values[static_cast<std::size_t>(t + tau)];
                if (std::isnan(a) || std::isnan(b)) continue;
                std::int8_t s = e.values[static_cast<std::size_t>(t)];
                if (conv == Convention::exc0 && s == 0) continue;
                double x = (std::log(b) - std::log(a)) * static_cast<double>(s);
                sum += x;
                ++n;
            }
        }
        out.sums.push_back(sum);
        out.counts.push_back(n);
        out.values.push_back(n > 0 ? sum / static_cast<double>(n) : xresp::kUndefined);
    }
    return out;
}

inline Curve correlator(std::span<const SignSeries* const> eps_i,
                        std::span<const SignSeries* const> eps_j, const LagGrid& grid,
                        Convention conv, ZeroPolicy policy = ZeroPolicy::condition_on_j) {
    Curve out;
    for (int tau : grid.lags) {
        double sum = 0.0;
        std::int64_t n = 0;
        for (std::size_t d = 0; d < eps_i.size(); ++d) {
            const SignSeries& ei = *eps_i[d];
            const SignSeries& ej = *eps_j[d];
            int T = static_cast<int>(ej.values.size());
            for (int t = 0; t + tau < T; ++t) {
                std::int8_t si = ei.values[static_cast<std::size_t>(t + tau)];
                std::int8_t sj = ej.values[static_cast<std::size_t>(t)];
                if (conv == Convention::exc0) {
                    if (sj == 0) continue;
                    if (policy == ZeroPolicy::condition_on_both && si == 0) continue;
                }
                double x = static_cast<double>(si * sj);
                sum += x;
                ++n;
            }
        }
        out.sums.push_back(sum);
        out.counts.push_back(n);
        out.values.push_back(n > 0 ? sum / static_cast<double>(n) : xresp::kUndefined);
    }
    return out;
}

inline Curve only_zero(const Curve& inc, const Curve& exc) {
    Curve out;
    for (std::size_t k = 0; k < inc.values.size(); ++k) {
        out.sums.push_back(inc.sums[k] - exc.sums[k]);
        out.counts.push_back(inc.counts[k] - exc.counts[k]);
        out.values.push_back((!std::isnan(inc.values[k]) && !std::isnan(exc.values[k]))
                                 ? inc.values[k] - exc.values[k]
                                 : xresp::kUndefined);
    }
    return out;
}

// Double mean over ordered pairs, rows first: for each impacted stock i the
// mean over j of R_ij, then the mean over i.
inline Curve market_average(
    const std::map<std::pair<std::string, std::string>, Curve>& pair_curves,
    std::span<const std::string> symbols, std::size_t n_lags) {
    Curve out;
    for (std::size_t k = 0; k < n_lags; ++k) {
        double outer = 0.0;
        std::int64_t rows = 0, pairs = 0;
        for (const std::string& i : symbols) {
            double row = 0.0;
            std::int64_t row_n = 0;
            for (const std::string& j : symbols) {
                if (i == j) continue;
                auto it = pair_curves.find({i, j});
                if (it == pair_curves.end()) continue;
                double v = it->second.values[k];
                if (std::isnan(v)) continue;
                row += v;
                ++row_n;
                ++pairs;
            }
            if (row_n > 0) {
                outer += row / static_cast<double>(row_n);
                ++rows;
            }
        }
        out.sums.push_back(outer);
        out.counts.push_back(pairs);
        out.values.push_back(rows > 0 ? outer / static_cast<double>(rows) : xresp::kUndefined);
    }
    return out;
}

// Normalized matrix at one lag from raw pair values.
inline std::vector<double> matrix(
    const std::map<std::pair<std::string, std::string>, double>& raw,
    std::span<const std::string> ordered) {
    std::size_t n = ordered.size();
    std::vector<double> m(n * n, 0.0);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = raw.at({ordered[i], ordered[j]});
            m[i * n + j] = v;
            max_abs = std::max(max_abs, std::fabs(v));
        }
    if (max_abs > 0.0)
        for (double& v : m) v /= max_abs;
    else
        for (double& v : m) v = 0.0;
    return m;
}

// Odd/even-day noise per the normalized-distance definition.
inline std::vector<double> noise(std::span<const MidpointSeries* const> mids,
                                 std::span<const SignSeries* const> signs, const LagGrid& grid,
                                 Convention conv) {
    std::vector<const MidpointSeries*> modd, meven;
    std::vector<const SignSeries*> eodd, eeven;
    for (std::size_t d = 0; d < mids.size(); ++d) {
        if (d % 2 == 0) {
            modd.push_back(mids[d]);
            eodd.push_back(signs[d]);
        } else {
            meven.push_back(mids[d]);
            eeven.push_back(signs[d]);
        }
    }
    Curve all = response(mids, signs, grid, conv);
    Curve r1 = response(std::span<const MidpointSeries* const>(modd),
                        std::span<const SignSeries* const>(eodd), grid, conv);
    Curve r2 = response(std::span<const MidpointSeries* const>(meven),
                        std::span<const SignSeries* const>(eeven), grid, conv);
    std::vector<double> nu(grid.size(), xresp::kUndefined);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double r = all.values[k], a = r1.values[k], b = r2.values[k];
        if (std::isnan(r) || r == 0.0 || std::isnan(a) || std::isnan(b)) continue;
        nu[k] = std::sqrt(0.5 * ((a - r) * (a - r) + (b - r) * (b - r))) / std::fabs(r);
    }
    return nu;
}

// ---------------------------------------------------------------------------
// Randomized toy datasets
// ---------------------------------------------------------------------------

struct ToyStock {
    std::vector<MidpointSeries> mids;
    std::vector<SignSeries> signs;
};

struct ToyMarket {
    int session_length = 0;
    std::vector<Date> days;
    std::vector<ToyStock> stocks;

    std::vector<const MidpointSeries*> mid_ptrs(std::size_t i) const {
        std::vector<const MidpointSeries*> p;
        for (const auto& m : stocks[i].mids) p.push_back(&m);
        return p;
    }
    std::vector<const SignSeries*> sign_ptrs(std::size_t i) const {
        std::vector<const SignSeries*> p;
        for (const auto& s : stocks[i].signs) p.push_back(&s);
        return p;
    }
};

/// Random market of up to `max_stocks` stocks over up to 5 days of <= 50 s
/// sessions. Midpoints are positive with an optional undefined prefix; signs
/// are uniform over {-1, 0, +1}.
inline ToyMarket make_toy_market(std::mt19937_64& rng, int max_stocks = 4,
                                 bool allow_undefined_prefix = true) {
    std::uniform_int_distribution<int> len_dist(10, 50);
    std::uniform_int_distribution<int> day_dist(1, 5);
    std::uniform_int_distribution<int> stock_dist(2, max_stocks);
    std::uniform_real_distribution<double> step(-0.01, 0.01);
    std::uniform_int_distribution<int> sign_dist(-1, 1);

    ToyMarket market;
    market.session_length = len_dist(rng);
    int n_days = day_dist(rng);
    Date day{2008, 1, 1};
    for (int d = 0; d < n_days; ++d, day = xresp::next_day(day)) market.days.push_back(day);

    int n_stocks = stock_dist(rng);
    for (int i = 0; i < n_stocks; ++i) {
        ToyStock stock;
        for (const Date& d : market.days) {
            MidpointSeries m;
            m.day = d;
            m.values.assign(static_cast<std::size_t>(market.session_length), xresp::kUndefined);
            int fd = 0;
            if (allow_undefined_prefix) {
                std::uniform_int_distribution<int> fd_dist(0, market.session_length / 4);
                fd = fd_dist(rng);
            }
            m.first_defined = fd;
            double price = 100.0 * (1.0 + 0.05 * i);
            for (int t = fd; t < market.session_length; ++t) {
                price *= std::exp(step(rng));
                m.values[static_cast<std::size_t>(t)] = price;
            }
            stock.mids.push_back(std::move(m));

            SignSeries s;
            s.day = d;
            s.convention = xresp::SignConvention::number_imbalance;
            s.values.resize(static_cast<std::size_t>(market.session_length));
            for (auto& v : s.values) v = static_cast<std::int8_t>(sign_dist(rng));
            stock.signs.push_back(std::move(s));
        }
        market.stocks.push_back(std::move(stock));
    }
    return market;
}

}  // namespace oracle
