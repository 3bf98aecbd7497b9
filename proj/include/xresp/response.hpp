#pragma once

// Self- and cross-response functions, trade sign correlators, the only-zero
// decomposition and the doubly averaged market response.
//
// Averages follow a fixed accumulation order (days ascending, seconds
// ascending within each lag), and zero-product terms are skipped; both choices
// keep the per-lag sums identical to a direct loop over all events.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "xresp/records.hpp"

namespace xresp {

// ---------------------------------------------------------------------------
// Lag grid and curve container
// ---------------------------------------------------------------------------

/// Ascending integer lags in seconds, all >= 1. Default analysis grid is
/// 1..1000.
struct LagGrid {
    std::vector<int> lags;

    LagGrid() = default;
    explicit LagGrid(std::vector<int> l) : lags(std::move(l)) { validate(); }

    static LagGrid range(int lo, int hi) {
        std::vector<int> l;
        l.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (int t = lo; t <= hi; ++t) l.push_back(t);
        return LagGrid(std::move(l));
    }
    static LagGrid standard() { return range(1, 1000); }

    void validate() const {
        if (lags.empty()) throw ConfigError("lag grid is empty");
        if (lags.front() < 1) throw ConfigError("lags must be >= 1");
        for (std::size_t i = 1; i < lags.size(); ++i)
            if (lags[i] <= lags[i - 1]) throw ConfigError("lags must be strictly ascending");
    }

    std::size_t size() const { return lags.size(); }
    bool operator==(const LagGrid&) const = default;
};

enum class Convention { inc0, exc0, only0 };
enum class CurveKind { response, sign_correlator };

inline const char* to_string(Convention c) {
    switch (c) {
        case Convention::inc0: return "inc0";
        case Convention::exc0: return "exc0";
        case Convention::only0: return "only0";
    }
    return "?";
}
inline const char* to_string(CurveKind k) {
    return k == CurveKind::response ? "response" : "sign_correlator";
}

/// A response or sign-correlator curve on a lag grid. `values[k]` is the
/// average over `counts[k]` events (NaN when no events), `sums[k]` the raw
/// numerator, and `stderrs[k]` the standard error of the mean (sample standard
/// deviation of the averaged products divided by sqrt(count); NaN when
/// count < 2).
struct ResponseCurve {
    std::string stock_i;
    std::string stock_j;
    Convention convention = Convention::inc0;
    CurveKind kind = CurveKind::response;
    LagGrid lags;
    std::vector<double> values;
    std::vector<double> sums;
    std::vector<std::int64_t> counts;
    std::vector<double> stderrs;
};

/// For exc0 correlators: whether only the conditioning sign eps_j(t) must be
/// nonzero, or both signs of the averaged product.
enum class ZeroPolicy { condition_on_j, condition_on_both };

namespace detail {

struct LagAccum {
    double sum = 0.0;
    double sumsq = 0.0;
    std::int64_t n = 0;
};

inline void finalize(const std::vector<LagAccum>& acc, ResponseCurve& curve) {
    std::size_t m = acc.size();
    curve.values.resize(m);
    curve.sums.resize(m);
    curve.counts.resize(m);
    curve.stderrs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        curve.sums[k] = acc[k].sum;
        curve.counts[k] = acc[k].n;
        if (acc[k].n > 0) {
            double mean = acc[k].sum / static_cast<double>(acc[k].n);
            curve.values[k] = mean;
            if (acc[k].n > 1) {
                double nd = static_cast<double>(acc[k].n);
                double var_num = acc[k].sumsq - acc[k].sum * acc[k].sum / nd;
                if (var_num < 0.0) var_num = 0.0;
                curve.stderrs[k] = std::sqrt(var_num / (nd - 1.0) / nd);
            } else {
                curve.stderrs[k] = kUndefined;
            }
        } else {
            curve.values[k] = kUndefined;
            curve.stderrs[k] = kUndefined;
        }
    }
}

inline void check_alignment(std::size_t n_i, std::size_t n_j) {
    if (n_i != n_j) throw DataError("day lists of the two series differ in length");
    if (n_i == 0) throw DataError("no common days to average over");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Log-returns
// ---------------------------------------------------------------------------

/// r(t, tau) = log m(t+tau) - log m(t); NaN when either midpoint is undefined
/// or the lag leaves the session.
inline double log_return(const MidpointSeries& m, int t, int tau) {
    if (t < 0 || tau < 0 || static_cast<std::size_t>(t + tau) >= m.values.size())
        return kUndefined;
    double a = m.values[static_cast<std::size_t>(t)];
    double b = m.values[static_cast<std::size_t>(t + tau)];
    if (!is_defined(a) || !is_defined(b)) return kUndefined;
    return std::log(b) - std::log(a);
}

// ---------------------------------------------------------------------------
// Response function
// ---------------------------------------------------------------------------

/// Average of r_i(t, tau) * eps_j(t) over all valid (day, t). inc0 averages
/// over every t with a defined return; exc0 restricts to eps_j(t) != 0.
/// Both series must cover the same common-day list, ascending.
inline ResponseCurve response(std::span<const MidpointSeries* const> m_i,
                              std::span<const SignSeries* const> eps_j, const LagGrid& grid,
                              Convention conv) {
    grid.validate();
    if (conv == Convention::only0)
        throw ConfigError("response: only0 is derived via only_zero(), not estimated directly");
    detail::check_alignment(m_i.size(), eps_j.size());

    std::vector<detail::LagAccum> acc(grid.size());
    std::vector<double> logm;
    std::vector<int> nz_t;
    std::vector<double> nz_s;

    for (std::size_t d = 0; d < m_i.size(); ++d) {
        const MidpointSeries& m = *m_i[d];
        const SignSeries& e = *eps_j[d];
        if (m.day != e.day)
            throw DataError("response: day mismatch between midpoints and signs (" +
                            format_date(m.day) + " vs " + format_date(e.day) + ")");
        if (m.values.size() != e.values.size())
            throw DataError("response: series length mismatch on " + format_date(m.day));

        const int T = static_cast<int>(m.values.size());
        const int fd = m.first_defined;

        logm.resize(m.values.size());
        for (int t = fd; t < T; ++t)
            logm[static_cast<std::size_t>(t)] = std::log(m.values[static_cast<std::size_t>(t)]);

        // Nonzero signs at seconds with a defined midpoint; zero-sign events
        // contribute nothing to the numerator under either convention.
        nz_t.clear();
        nz_s.clear();
        for (int t = fd; t < T; ++t) {
            std::int8_t s = e.values[static_cast<std::size_t>(t)];
            if (s != 0) {
                nz_t.push_back(t);
                nz_s.push_back(static_cast<double>(s));
            }
        }

        for (std::size_t k = 0; k < grid.size(); ++k) {
            const int tau = grid.lags[k];
            detail::LagAccum& a = acc[k];
            if (conv == Convention::inc0) {
                int avail = T - tau - fd;
                if (avail > 0) a.n += avail;
            }
            for (std::size_t idx = 0; idx < nz_t.size(); ++idx) {
                int t = nz_t[idx];
                if (t + tau >= T) break;
                double x = (logm[static_cast<std::size_t>(t + tau)] -
                            logm[static_cast<std::size_t>(t)]) *
                           nz_s[idx];
                a.sum += x;
                a.sumsq += x * x;
                if (conv == Convention::exc0) ++a.n;
            }
        }
    }

    ResponseCurve curve;
    curve.convention = conv;
    curve.kind = CurveKind::response;
    curve.lags = grid;
    detail::finalize(acc, curve);
    return curve;
}

// ---------------------------------------------------------------------------
// Trade sign correlator
// ---------------------------------------------------------------------------

/// Average of eps_i(t+tau) * eps_j(t); bounded in [-1, 1]. Under exc0 the
/// default conditions on eps_j(t) != 0 only; `policy` can additionally
/// require eps_i(t+tau) != 0.
inline ResponseCurve sign_correlator(std::span<const SignSeries* const> eps_i,
                                     std::span<const SignSeries* const> eps_j,
                                     const LagGrid& grid, Convention conv,
                                     ZeroPolicy policy = ZeroPolicy::condition_on_j) {
    grid.validate();
    if (conv == Convention::only0)
        throw ConfigError("sign_correlator: only0 is derived via only_zero()");
    detail::check_alignment(eps_i.size(), eps_j.size());

    std::vector<detail::LagAccum> acc(grid.size());
    std::vector<int> nz_t;
    std::vector<std::int8_t> nz_s;

    for (std::size_t d = 0; d < eps_i.size(); ++d) {
        const SignSeries& ei = *eps_i[d];
        const SignSeries& ej = *eps_j[d];
        if (ei.day != ej.day)
            throw DataError("sign_correlator: day mismatch (" + format_date(ei.day) + " vs " +
                            format_date(ej.day) + ")");
        if (ei.values.size() != ej.values.size())
            throw DataError("sign_correlator: series length mismatch on " + format_date(ei.day));

        const int T = static_cast<int>(ej.values.size());
        nz_t.clear();
        nz_s.clear();
        for (int t = 0; t < T; ++t) {
            std::int8_t s = ej.values[static_cast<std::size_t>(t)];
            if (s != 0) {
                nz_t.push_back(t);
                nz_s.push_back(s);
            }
        }

        for (std::size_t k = 0; k < grid.size(); ++k) {
            const int tau = grid.lags[k];
            detail::LagAccum& a = acc[k];
            if (conv == Convention::inc0) {
                if (T > tau) a.n += T - tau;
            }
            for (std::size_t idx = 0; idx < nz_t.size(); ++idx) {
                int t = nz_t[idx];
                if (t + tau >= T) break;
                std::int8_t si = ei.values[static_cast<std::size_t>(t + tau)];
                if (conv == Convention::exc0) {
                    if (policy == ZeroPolicy::condition_on_j || si != 0) ++a.n;
                }
                if (si != 0) {
                    double x = static_cast<double>(si * nz_s[idx]);
                    a.sum += x;
                    a.sumsq += x * x;
                }
            }
        }
    }

    ResponseCurve curve;
    curve.convention = conv;
    curve.kind = CurveKind::sign_correlator;
    curve.lags = grid;
    detail::finalize(acc, curve);
    return curve;
}

// ---------------------------------------------------------------------------
// Only-zero decomposition
// ---------------------------------------------------------------------------

/// Pointwise difference inc0 - exc0, the response (or correlator) attributable
/// to zero-sign seconds. Standard errors are not defined for the difference
/// of the two overlapping averages and are left NaN.
inline ResponseCurve only_zero(const ResponseCurve& inc, const ResponseCurve& exc) {
    if (inc.convention != Convention::inc0 || exc.convention != Convention::exc0)
        throw DataError("only_zero: expects an inc0 and an exc0 curve");
    if (inc.kind != exc.kind) throw DataError("only_zero: curve kinds differ");
    if (inc.lags != exc.lags) throw DataError("only_zero: lag grids differ");
    if (inc.stock_i != exc.stock_i || inc.stock_j != exc.stock_j)
        throw DataError("only_zero: stock pairs differ");

    ResponseCurve out;
    out.stock_i = inc.stock_i;
    out.stock_j = inc.stock_j;
    out.convention = Convention::only0;
    out.kind = inc.kind;
    out.lags = inc.lags;
    std::size_t m = inc.lags.size();
    out.values.resize(m);
    out.sums.resize(m);
    out.counts.resize(m);
    out.stderrs.assign(m, kUndefined);
    for (std::size_t k = 0; k < m; ++k) {
        out.values[k] = (is_defined(inc.values[k]) && is_defined(exc.values[k]))
                            ? inc.values[k] - exc.values[k]
                            : kUndefined;
        out.sums[k] = inc.sums[k] - exc.sums[k];
        out.counts[k] = inc.counts[k] - exc.counts[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Doubly averaged market response
// ---------------------------------------------------------------------------

/// Unweighted double average over ordered pairs: first over the impacting
/// stock j for each impacted i, then over i. Self pairs are never included.
/// `counts[k]` holds the number of pair values entering at that lag, and
/// `stderrs[k]` the standard error across the per-i row means.
inline ResponseCurve market_average(std::span<const ResponseCurve> curves,
                                    std::span<const std::string> symbols,
                                    std::vector<std::string>* warnings = nullptr) {
    if (curves.empty()) throw DataError("market_average: no curves");
    const ResponseCurve& ref = curves.front();
    std::map<std::pair<std::string, std::string>, const ResponseCurve*> by_pair;
    for (const ResponseCurve& c : curves) {
        if (c.lags != ref.lags) throw DataError("market_average: lag grids differ");
        if (c.convention != ref.convention) throw DataError("market_average: conventions differ");
        if (c.kind != ref.kind) throw DataError("market_average: curve kinds differ");
        if (c.stock_i == c.stock_j) continue;  // self pairs excluded by definition
        by_pair[{c.stock_i, c.stock_j}] = &c;
    }

    std::size_t m = ref.lags.size();
    std::vector<double> outer_sum(m, 0.0), outer_sumsq(m, 0.0);
    std::vector<std::int64_t> outer_n(m, 0), pair_n(m, 0);
    std::vector<double> row_sum(m), row_cnt(m);

    for (const std::string& i : symbols) {
        std::fill(row_sum.begin(), row_sum.end(), 0.0);
        std::fill(row_cnt.begin(), row_cnt.end(), 0.0);
        for (const std::string& j : symbols) {
            if (i == j) continue;
            auto it = by_pair.find({i, j});
            if (it == by_pair.end()) {
                if (warnings) warnings->push_back("missing pair " + i + ":" + j + " skipped");
                continue;
            }
            const ResponseCurve& c = *it->second;
            for (std::size_t k = 0; k < m; ++k) {
                if (is_defined(c.values[k])) {
                    row_sum[k] += c.values[k];
                    row_cnt[k] += 1.0;
                    ++pair_n[k];
                }
            }
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (row_cnt[k] > 0.0) {
                double mean = row_sum[k] / row_cnt[k];
                outer_sum[k] += mean;
                outer_sumsq[k] += mean * mean;
                ++outer_n[k];
            }
        }
    }

    ResponseCurve out;
    out.stock_i = "*";
    out.stock_j = "*";
    out.convention = ref.convention;
    out.kind = ref.kind;
    out.lags = ref.lags;
    out.values.resize(m);
    out.sums.resize(m);
    out.counts.resize(m);
    out.stderrs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        out.counts[k] = pair_n[k];
        out.sums[k] = outer_sum[k];
        if (outer_n[k] > 0) {
            double nd = static_cast<double>(outer_n[k]);
            out.values[k] = outer_sum[k] / nd;
            if (outer_n[k] > 1) {
                double var_num = outer_sumsq[k] - outer_sum[k] * outer_sum[k] / nd;
                if (var_num < 0.0) var_num = 0.0;
                out.stderrs[k] = std::sqrt(var_num / (nd - 1.0) / nd);
            } else {
                out.stderrs[k] = kUndefined;
            }
        } else {
            out.values[k] = kUndefined;
            out.stderrs[k] = kUndefined;
        }
    }
    return out;
}

// Convenience overloads taking owning vectors.
inline std::vector<const MidpointSeries*> as_ptrs(std::span<const MidpointSeries> v) {
    std::vector<const MidpointSeries*> p;
    p.reserve(v.size());
    for (const auto& s : v) p.push_back(&s);
    return p;
}
inline std::vector<const SignSeries*> as_ptrs(std::span<const SignSeries> v) {
    std::vector<const SignSeries*> p;
    p.reserve(v.size());
    for (const auto& s : v) p.push_back(&s);
    return p;
}

inline ResponseCurve response(std::span<const MidpointSeries> m_i,
                              std::span<const SignSeries> eps_j, const LagGrid& grid,
                              Convention conv) {
    auto mp = as_ptrs(m_i);
    auto ep = as_ptrs(eps_j);
    return response(std::span<const MidpointSeries* const>(mp),
                    std::span<const SignSeries* const>(ep), grid, conv);
}

inline ResponseCurve sign_correlator(std::span<const SignSeries> eps_i,
                                     std::span<const SignSeries> eps_j, const LagGrid& grid,
                                     Convention conv,
                                     ZeroPolicy policy = ZeroPolicy::condition_on_j) {
    auto ip = as_ptrs(eps_i);
    auto jp = as_ptrs(eps_j);
    return sign_correlator(std::span<const SignSeries* const>(ip),
                           std::span<const SignSeries* const>(jp), grid, conv, policy);
}

}  // namespace xresp
