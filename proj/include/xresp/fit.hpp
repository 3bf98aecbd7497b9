#pragma once

// Three-parameter power-law fit for sign correlators,
//     f(tau) = theta / (1 + (tau/tau0)^2)^(gamma/2),
// by damped Gauss-Newton (Levenberg-Marquardt) with the analytic Jacobian,
// multi-started over a coarse seed grid. Fit quality is the normalized chi^2,
// RSS / (M - M_P).

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "xresp/response.hpp"

namespace xresp {

struct PowerLawParams {
    double theta = 0.0;
    double tau0 = 1.0;
    double gamma = 1.0;
};

struct PowerLawFit {
    double theta = 0.0;
    double tau0 = 0.0;
    double gamma = 0.0;
    double chi2 = 0.0;
    bool converged = false;
    int iterations = 0;
    int n_points = 0;
};

/// Thrown when every start diverges; carries the best-effort parameters.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& msg, PowerLawFit best) : std::runtime_error(msg), best_(best) {}
    const PowerLawFit& best_effort() const { return best_; }

private:
    PowerLawFit best_;
};

inline double powerlaw_model(double theta, double tau0, double gamma, double tau) {
    if (!(tau0 > 0.0)) throw ConfigError("powerlaw_model: tau0 must be > 0");
    double z = tau / tau0;
    return theta * std::exp(-0.5 * gamma * std::log1p(z * z));
}

/// d f / d (theta, tau0, gamma) at one lag.
inline std::array<double, 3> powerlaw_gradient(double theta, double tau0, double gamma,
                                               double tau) {
    if (!(tau0 > 0.0)) throw ConfigError("powerlaw_gradient: tau0 must be > 0");
    double z = tau / tau0;
    double z2 = z * z;
    double logq = std::log1p(z2);
    double u = std::exp(-0.5 * gamma * logq);  // q^(-gamma/2)
    double q = 1.0 + z2;
    return {
        u,                                              // d/d theta
        theta * u * gamma * z2 / (tau0 * q),            // d/d tau0
        -0.5 * theta * u * logq,                        // d/d gamma
    };
}

/// Normalized chi^2: sum of squared residuals over M - n_params degrees of
/// freedom.
inline double chi2_normalized(std::span<const double> model_values,
                              std::span<const double> data_values, int n_params) {
    if (model_values.size() != data_values.size())
        throw DataError("chi2_normalized: length mismatch");
    int m = static_cast<int>(model_values.size());
    if (m <= n_params)
        throw DataError("chi2_normalized: need more points than parameters (M=" +
                        std::to_string(m) + ", M_P=" + std::to_string(n_params) + ")");
    double rss = 0.0;
    for (std::size_t k = 0; k < model_values.size(); ++k) {
        double e = model_values[k] - data_values[k];
        rss += e * e;
    }
    return rss / static_cast<double>(m - n_params);
}

namespace detail {

constexpr double kTau0Lo = 1e-6, kTau0Hi = 1e6;
constexpr double kGammaLo = 0.01, kGammaHi = 10.0;

inline double clampd(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline double rss_of(std::span<const double> taus, std::span<const double> ys,
                     const PowerLawParams& p) {
    double rss = 0.0;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        double e = powerlaw_model(p.theta, p.tau0, p.gamma, taus[k]) - ys[k];
        rss += e * e;
    }
    return rss;
}

struct LmResult {
    PowerLawParams p;
    double rss = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();
    double rel_step = std::numeric_limits<double>::infinity();
    bool ok = false;  // at least one accepted step and finite result
    int iterations = 0;
};

/// Solve the 3x3 system A x = b in place; false when singular.
inline bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
                   std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-300) return false;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 3; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

inline LmResult levenberg_marquardt(std::span<const double> taus, std::span<const double> ys,
                                    PowerLawParams p, int max_iter) {
    LmResult res;
    p.tau0 = clampd(p.tau0, kTau0Lo, kTau0Hi);
    p.gamma = clampd(p.gamma, kGammaLo, kGammaHi);
    double rss = rss_of(taus, ys, p);
    if (!std::isfinite(rss)) return res;

    double lambda = 1e-3;
    bool any_accept = false;
    int iter = 0;
    double grad_norm = std::numeric_limits<double>::infinity();
    double rel_step = std::numeric_limits<double>::infinity();

    for (; iter < max_iter; ++iter) {
        // Normal equations from the analytic Jacobian.
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jte{};
        for (std::size_t k = 0; k < taus.size(); ++k) {
            auto g = powerlaw_gradient(p.theta, p.tau0, p.gamma, taus[k]);
            double e = powerlaw_model(p.theta, p.tau0, p.gamma, taus[k]) - ys[k];
            for (int r = 0; r < 3; ++r) {
                jte[r] += g[r] * e;
                for (int c = r; c < 3; ++c) jtj[r][c] += g[r] * g[c];
            }
        }
        jtj[1][0] = jtj[0][1];
        jtj[2][0] = jtj[0][2];
        jtj[2][1] = jtj[1][2];

        // Gradient of RSS is 2 J^T e.
        grad_norm = 2.0 * std::sqrt(jte[0] * jte[0] + jte[1] * jte[1] + jte[2] * jte[2]);
        if (grad_norm <= 1e-8 * (1.0 + rss) && rel_step <= 1e-12) break;

        bool stepped = false;
        for (int attempt = 0; attempt < 16; ++attempt) {
            auto damped = jtj;
            for (int r = 0; r < 3; ++r) {
                double diag = jtj[r][r] > 0.0 ? jtj[r][r] : 1.0;
                damped[r][r] = jtj[r][r] + lambda * diag;
            }
            std::array<double, 3> delta{};
            if (!solve3(damped, {-jte[0], -jte[1], -jte[2]}, delta)) {
                lambda *= 10.0;
                continue;
            }
            PowerLawParams trial{p.theta + delta[0], clampd(p.tau0 + delta[1], kTau0Lo, kTau0Hi),
                                 clampd(p.gamma + delta[2], kGammaLo, kGammaHi)};
            double trial_rss = rss_of(taus, ys, trial);
            if (std::isfinite(trial_rss) && trial_rss <= rss) {
                double scale = std::fabs(p.theta) + std::fabs(p.tau0) + std::fabs(p.gamma) + 1e-12;
                rel_step = (std::fabs(trial.theta - p.theta) + std::fabs(trial.tau0 - p.tau0) +
                            std::fabs(trial.gamma - p.gamma)) /
                           scale;
                p = trial;
                rss = trial_rss;
                lambda = std::max(lambda * 0.1, 1e-14);
                stepped = true;
                any_accept = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) break;  // stalled: lambda exhausted without improvement
        if (rel_step <= 1e-15) break;
    }

    res.p = p;
    res.rss = rss;
    res.grad_norm = grad_norm;
    res.rel_step = rel_step;
    res.iterations = iter;
    res.ok = any_accept && std::isfinite(rss);
    return res;
}

}  // namespace detail

/// Fit the power law to (tau, value) points. Multi-start over a coarse seed
/// grid (plus the optional explicit seed); the lowest residual run wins.
inline PowerLawFit fit_powerlaw(std::span<const double> taus, std::span<const double> values,
                                std::optional<PowerLawParams> init = std::nullopt) {
    if (taus.size() != values.size()) throw DataError("fit_powerlaw: length mismatch");
    if (taus.size() < 10)
        throw DataError("fit_powerlaw: need at least 10 defined lags, got " +
                        std::to_string(taus.size()));

    std::vector<PowerLawParams> seeds;
    if (init) seeds.push_back(*init);
    double theta0 = values.front();
    if (theta0 == 0.0) theta0 = 1e-3;
    for (double tau0 : {0.05, 0.5, 5.0, 50.0})
        for (double gamma : {0.5, 1.0, 1.5, 2.0}) seeds.push_back({theta0, tau0, gamma});

    detail::LmResult best;
    int total_iter = 0;
    for (const PowerLawParams& s : seeds) {
        detail::LmResult r = detail::levenberg_marquardt(taus, values, s, 300);
        total_iter += r.iterations;
        if (r.ok && r.rss < best.rss) best = r;
    }

    PowerLawFit fit;
    fit.n_points = static_cast<int>(taus.size());
    if (!best.ok) {
        fit.theta = seeds.front().theta;
        fit.tau0 = seeds.front().tau0;
        fit.gamma = seeds.front().gamma;
        fit.chi2 = kUndefined;
        fit.iterations = total_iter;
        throw FitError("fit_powerlaw: all starts diverged", fit);
    }
    fit.theta = best.p.theta;
    fit.tau0 = best.p.tau0;
    fit.gamma = best.p.gamma;
    fit.chi2 = best.rss / static_cast<double>(taus.size() - 3);
    fit.converged =
        best.grad_norm <= 1e-8 * (1.0 + best.rss) && best.rel_step <= 1e-10;
    fit.iterations = total_iter;
    return fit;
}

/// Fit a sign-correlator curve; undefined lags are dropped and the degrees of
/// freedom reduced accordingly.
inline PowerLawFit fit_powerlaw(const ResponseCurve& curve,
                                std::optional<PowerLawParams> init = std::nullopt) {
    if (curve.kind != CurveKind::sign_correlator)
        throw DataError("fit_powerlaw: expects a sign-correlator curve");
    std::vector<double> taus, ys;
    taus.reserve(curve.lags.size());
    ys.reserve(curve.lags.size());
    for (std::size_t k = 0; k < curve.lags.size(); ++k) {
        if (is_defined(curve.values[k])) {
            taus.push_back(static_cast<double>(curve.lags.lags[k]));
            ys.push_back(curve.values[k]);
        }
    }
    return fit_powerlaw(taus, ys, init);
}

}  // namespace xresp
