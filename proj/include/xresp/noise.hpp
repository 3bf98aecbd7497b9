#pragma once

// Cross-response noise: split the common trading days into odd and even
// subsets by their position in the ascending day list, and measure the
// normalized distance between subset responses and the all-day response.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "xresp/response.hpp"

namespace xresp {

struct NoiseCurve {
    std::string stock_i;
    std::string stock_j;
    LagGrid lags;
    std::vector<double> nu;  // NaN where the all-day response vanishes
    int n_days_odd = 0;
    int n_days_even = 0;
};

/// nu(tau) = sqrt(1/2 * sum_k (R^(k)(tau) - R(tau))^2) / |R(tau)| with
/// k = 1 (odd-numbered days) and k = 2 (even-numbered days), days numbered
/// 1.. in ascending order. Undefined where R(tau) is 0 or where a subset has
/// no events.
inline NoiseCurve response_noise(std::span<const MidpointSeries* const> m_i,
                                 std::span<const SignSeries* const> eps_j, const LagGrid& grid,
                                 Convention conv) {
    detail::check_alignment(m_i.size(), eps_j.size());
    if (m_i.size() < 2) throw DataError("response_noise: need at least 2 common days");

    std::vector<const MidpointSeries*> m_odd, m_even;
    std::vector<const SignSeries*> e_odd, e_even;
    for (std::size_t d = 0; d < m_i.size(); ++d) {
        if (d % 2 == 0) {  // day number d+1 is odd
            m_odd.push_back(m_i[d]);
            e_odd.push_back(eps_j[d]);
        } else {
            m_even.push_back(m_i[d]);
            e_even.push_back(eps_j[d]);
        }
    }

    ResponseCurve all = response(m_i, eps_j, grid, conv);
    ResponseCurve r1 = response(std::span<const MidpointSeries* const>(m_odd),
                                std::span<const SignSeries* const>(e_odd), grid, conv);
    ResponseCurve r2 = response(std::span<const MidpointSeries* const>(m_even),
                                std::span<const SignSeries* const>(e_even), grid, conv);

    NoiseCurve out;
    out.lags = grid;
    out.n_days_odd = static_cast<int>(m_odd.size());
    out.n_days_even = static_cast<int>(m_even.size());
    out.nu.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double r = all.values[k];
        double a = r1.values[k];
        double b = r2.values[k];
        if (!is_defined(r) || r == 0.0 || !is_defined(a) || !is_defined(b)) {
            out.nu[k] = kUndefined;
            continue;
        }
        double da = a - r;
        double db = b - r;
        out.nu[k] = std::sqrt(0.5 * (da * da + db * db)) / std::fabs(r);
    }
    return out;
}

inline NoiseCurve response_noise(std::span<const MidpointSeries> m_i,
                                 std::span<const SignSeries> eps_j, const LagGrid& grid,
                                 Convention conv) {
    auto mp = as_ptrs(m_i);
    auto ep = as_ptrs(eps_j);
    return response_noise(std::span<const MidpointSeries* const>(mp),
                          std::span<const SignSeries* const>(ep), grid, conv);
}

}  // namespace xresp
