#pragma once

// Distribution of signed returns u_ij(tau) = r_i(t,tau) * eps_j(t), with
// folding of the negative half onto the positive axis and estimation of the
// shift that symmetrizes the distribution.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "xresp/response.hpp"

namespace xresp {

/// One (i, j) pair's aligned day series; histograms may pool several pairs.
struct PairSeries {
    std::span<const MidpointSeries* const> mids;
    std::span<const SignSeries* const> signs;
};

/// Histogram of signed returns at one lag on uniform bins spanning +-5
/// standard deviations of u around zero. `density` integrates to 1 over the
/// binned range; `folded_pos`/`folded_neg` compare the two half-axes
/// (mirror-symmetric bins, center bin excluded).
struct SignedReturnHistogram {
    int tau = 0;
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<double> density;    // size bins
    double shift = kUndefined;      // symmetrizing shift, set by the estimator
    std::vector<double> folded_pos;
    std::vector<double> folded_neg;
    std::int64_t n_events = 0;

    double bin_width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
};

namespace detail {

template <typename Fn>
inline void for_each_signed_return(std::span<const PairSeries> pairs, int tau, Convention conv,
                                   Fn&& fn) {
    for (const PairSeries& pair : pairs) {
        check_alignment(pair.mids.size(), pair.signs.size());
        for (std::size_t d = 0; d < pair.mids.size(); ++d) {
            const MidpointSeries& m = *pair.mids[d];
            const SignSeries& e = *pair.signs[d];
            if (m.day != e.day) throw DataError("signed returns: day mismatch");
            const int T = static_cast<int>(m.values.size());
            for (int t = m.first_defined; t + tau < T; ++t) {
                std::int8_t s = e.values[static_cast<std::size_t>(t)];
                if (conv == Convention::exc0 && s == 0) continue;
                double u = (std::log(m.values[static_cast<std::size_t>(t + tau)]) -
                            std::log(m.values[static_cast<std::size_t>(t)])) *
                           static_cast<double>(s);
                fn(u);
            }
        }
    }
}

}  // namespace detail

inline SignedReturnHistogram signed_return_histogram(std::span<const PairSeries> pairs, int tau,
                                                     int bins, Convention conv) {
    if (tau < 1) throw ConfigError("signed_return_histogram: tau must be >= 1");
    if (bins < 3) throw ConfigError("signed_return_histogram: need at least 3 bins");
    if (conv == Convention::only0)
        throw ConfigError("signed_return_histogram: only0 not supported");

    // Pass 1: spread of u.
    std::int64_t n = 0;
    double sum = 0.0, sumsq = 0.0;
    detail::for_each_signed_return(pairs, tau, conv, [&](double u) {
        ++n;
        sum += u;
        sumsq += u * u;
    });
    if (n == 0) throw DataError("signed_return_histogram: no events at tau=" + std::to_string(tau));
    double mean = sum / static_cast<double>(n);
    double var = sumsq / static_cast<double>(n) - mean * mean;
    double sigma = var > 0.0 ? std::sqrt(var) : 0.0;
    if (sigma == 0.0) sigma = std::fabs(mean) > 0.0 ? std::fabs(mean) : 1e-12;

    SignedReturnHistogram h;
    h.tau = tau;
    double half = 5.0 * sigma;
    double width = 2.0 * half / bins;
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int k = 0; k <= bins; ++k) h.bin_edges[static_cast<std::size_t>(k)] = -half + width * k;

    // Pass 2: fill. Events outside +-5 sigma are dropped; the density is
    // normalized over the events that land in a bin.
    std::vector<std::int64_t> count(static_cast<std::size_t>(bins), 0);
    std::int64_t in_range = 0;
    detail::for_each_signed_return(pairs, tau, conv, [&](double u) {
        if (u < -half || u > half) return;
        int k = static_cast<int>((u + half) / width);
        if (k == bins) k = bins - 1;  // right edge inclusive
        ++count[static_cast<std::size_t>(k)];
        ++in_range;
    });
    h.n_events = in_range;
    h.density.resize(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k)
        h.density[static_cast<std::size_t>(k)] =
            static_cast<double>(count[static_cast<std::size_t>(k)]) /
            (static_cast<double>(in_range) * width);

    // Fold the negative half onto the positive axis. With an odd bin count
    // the center bin maps onto itself and is left out.
    int half_bins = bins / 2;
    h.folded_pos.resize(static_cast<std::size_t>(half_bins));
    h.folded_neg.resize(static_cast<std::size_t>(half_bins));
    for (int k = 0; k < half_bins; ++k) {
        h.folded_pos[static_cast<std::size_t>(k)] =
            h.density[static_cast<std::size_t>(bins - half_bins + k)];
        h.folded_neg[static_cast<std::size_t>(k)] =
            h.density[static_cast<std::size_t>(half_bins - 1 - k)];
    }
    return h;
}

/// Pooled histogram over pre-aligned single-pair series.
inline SignedReturnHistogram signed_return_histogram(std::span<const MidpointSeries* const> mids,
                                                     std::span<const SignSeries* const> signs,
                                                     int tau, int bins, Convention conv) {
    PairSeries one{mids, signs};
    return signed_return_histogram(std::span<const PairSeries>(&one, 1), tau, bins, conv);
}

namespace detail {

inline double density_at(const SignedReturnHistogram& h, double x) {
    double lo = h.bin_edges.front(), hi = h.bin_edges.back();
    if (x < lo || x >= hi) return 0.0;
    double w = h.bin_width();
    auto k = static_cast<std::size_t>((x - lo) / w);
    if (k >= h.density.size()) k = h.density.size() - 1;
    return h.density[k];
}

/// L1 distance between the positive part and the folded negative part of the
/// distribution shifted by -delta, evaluated on a sub-bin quadrature grid.
inline double fold_asymmetry(const SignedReturnHistogram& h, double delta) {
    double w = h.bin_width();
    double range = h.bin_edges.back();
    double step = w / 8.0;
    double total = 0.0;
    for (double x = step / 2.0; x < range + std::fabs(delta); x += step) {
        double a = density_at(h, x + delta);
        double b = density_at(h, -x + delta);
        total += std::fabs(a - b) * step;
    }
    return total;
}

}  // namespace detail

/// Shift minimizing the L1 distance between the positive and the folded
/// negative part of the shifted distribution: coarse grid over +-10 bins,
/// then golden-section refinement.
inline double estimate_symmetrizing_shift(const SignedReturnHistogram& h) {
    if (h.density.empty()) throw DataError("estimate_symmetrizing_shift: empty histogram");

    // Both signs must carry mass, otherwise folding compares against nothing.
    double pos_mass = 0.0, neg_mass = 0.0;
    double w = h.bin_width();
    for (std::size_t k = 0; k < h.density.size(); ++k) {
        double center = 0.5 * (h.bin_edges[k] + h.bin_edges[k + 1]);
        (center >= 0 ? pos_mass : neg_mass) += h.density[k] * w;
    }
    if (pos_mass <= 0.0 || neg_mass <= 0.0)
        throw DataError("estimate_symmetrizing_shift: histogram not populated on both signs");

    const double span = 10.0 * w;
    const double grid_step = w / 4.0;
    double best_delta = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (double delta = -span; delta <= span + grid_step / 2; delta += grid_step) {
        double v = detail::fold_asymmetry(h, delta);
        if (v < best) {
            best = v;
            best_delta = delta;
        }
    }
    if (std::fabs(std::fabs(best_delta) - span) < grid_step / 2)
        throw DataError(
            "estimate_symmetrizing_shift: minimum at search boundary (delta=" +
            format_double(best_delta) + ", span=" + format_double(span) +
            "); distribution asymmetry exceeds the +-10 bin search window");

    // Golden-section refinement inside the bracketing grid cells.
    double lo = best_delta - grid_step, hi = best_delta + grid_step;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = detail::fold_asymmetry(h, c);
    double fd = detail::fold_asymmetry(h, d);
    while (hi - lo > w * 1e-3) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = detail::fold_asymmetry(h, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = detail::fold_asymmetry(h, d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace xresp
