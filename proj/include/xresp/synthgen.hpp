#pragma once

// Synthetic multi-stock order flow with controllable sign correlation memory
// and planted price impact, emitting exactly the CSV schemas the ingest and
// sign modules consume.
//
// Construction: per-second latent signs are thresholded stationary Gaussian
// fields. For a target sign autocorrelation K(tau) the latent correlation is
// sin(pi K(tau) / 2) (arcsine law), so the generated signs carry K exactly.
// Cross-stock correlation comes from a shared day-level factor with loading
// sqrt(cross_weight), giving a cross sign correlator of
// (2/pi) asin(cross_weight * sin(pi K(tau) / 2)).
//
// Trade prices move one tick in the direction of each sign change and stay
// put otherwise, so the tick rule recovers the planted per-trade signs
// exactly (up to the unset leading run of a day). Midpoints follow a
// lognormal random walk with drift impact_per_sign * eps(t) per second.

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xresp/records.hpp"
#include "xresp/session.hpp"

namespace xresp {

// ---------------------------------------------------------------------------
// Sign kernels
// ---------------------------------------------------------------------------

enum class KernelType { exponential, powerlaw };

/// Target sign autocorrelation for lags >= 1 (at lag 0 it is 1 by
/// construction). Values must lie in [0, 1].
struct SignKernel {
    KernelType type = KernelType::powerlaw;
    double theta = 0.5;
    double tau0 = 5.0;
    double gamma = 1.2;  // powerlaw only

    double operator()(double tau) const {
        if (type == KernelType::exponential) return theta * std::exp(-tau / tau0);
        double z = tau / tau0;
        return theta * std::exp(-0.5 * gamma * std::log1p(z * z));
    }

    void validate() const {
        if (!(tau0 > 0.0)) throw ConfigError("sign kernel: tau0 must be > 0");
        if (!(theta >= 0.0 && theta <= 1.0))
            throw ConfigError("sign kernel: amplitude must lie in [0, 1]");
        if (type == KernelType::powerlaw && !(gamma > 0.0))
            throw ConfigError("sign kernel: gamma must be > 0");
    }
};

// ---------------------------------------------------------------------------
// Generator configuration
// ---------------------------------------------------------------------------

struct GenConfig {
    int n_stocks = 2;
    int n_days = 5;
    SessionWindow session{};
    double trade_rate = 0.5;  // mean trades per second per stock
    SignKernel kernel{};
    double cross_weight = 0.3;     // shared-factor loading in [0, 1]
    double impact_per_sign = 0.0;  // log-return drift per unit aggregated sign
    double noise_sigma = 1e-4;     // per-second log-midpoint diffusion
    double label_flip_rate = 0.0;  // reference label corruption
    std::uint64_t seed = 1;

    double base_price = 100.0;
    double half_spread = 0.01;
    double mean_volume = 100.0;
    Date start_day{2008, 1, 1};

    void validate() const {
        session.validate();
        kernel.validate();
        if (n_stocks < 1) throw ConfigError("generator: n_stocks must be >= 1");
        if (n_days < 1) throw ConfigError("generator: n_days must be >= 1");
        if (trade_rate < 0.0) throw ConfigError("generator: trade_rate must be >= 0");
        if (!(cross_weight >= 0.0 && cross_weight <= 1.0))
            throw ConfigError("generator: cross structure infeasible, cross_weight outside [0, 1]");
        if (noise_sigma < 0.0) throw ConfigError("generator: noise_sigma must be >= 0");
        if (!(label_flip_rate >= 0.0 && label_flip_rate <= 1.0))
            throw ConfigError("generator: label_flip_rate must lie in [0, 1]");
        if (!(half_spread > 0.0)) throw ConfigError("generator: half_spread must be > 0");
        if (!(base_price > 20.0 * half_spread))
            throw ConfigError("generator: base_price too small against the spread");
        if (mean_volume < 1.0) throw ConfigError("generator: mean_volume must be >= 1");
    }
};

struct GenManifest {
    std::vector<std::string> symbols;
    std::vector<std::filesystem::path> trades_files;
    std::vector<std::filesystem::path> quotes_files;
    std::vector<std::filesystem::path> reference_files;
    std::filesystem::path sectors_file;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic stream seed per (day, stream kind, stock).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t day, std::uint64_t kind,
                                 std::uint64_t stock) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (day + 1));
    h = splitmix64(h ^ ((kind << 32) | (stock + 1)));
    return h;
}

/// Stationary zero-mean unit-variance Gaussian sampler on a fixed grid via
/// circulant embedding. One instance per process lifetime of a config; not
/// thread-safe (shared FFT buffers).
class GaussianFieldSampler {
public:
    GaussianFieldSampler(int length, const std::function<double(int)>& rho)
        : T_(length), N_(2 * length) {
        std::vector<double> circ(static_cast<std::size_t>(N_));
        for (int k = 0; k <= T_; ++k) circ[static_cast<std::size_t>(k)] = rho(k);
        for (int k = T_ + 1; k < N_; ++k)
            circ[static_cast<std::size_t>(k)] = circ[static_cast<std::size_t>(N_ - k)];

        in_ = fftw_alloc_complex(static_cast<std::size_t>(N_));
        out_ = fftw_alloc_complex(static_cast<std::size_t>(N_));
        plan_ = fftw_plan_dft_1d(N_, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);

        for (int k = 0; k < N_; ++k) {
            in_[k][0] = circ[static_cast<std::size_t>(k)];
            in_[k][1] = 0.0;
        }
        fftw_execute(plan_);

        double max_ev = 0.0, min_ev = 0.0;
        sqrt_lambda_.resize(static_cast<std::size_t>(N_));
        for (int k = 0; k < N_; ++k) {
            double ev = out_[k][0];
            max_ev = std::max(max_ev, ev);
            min_ev = std::min(min_ev, ev);
            sqrt_lambda_[static_cast<std::size_t>(k)] = ev > 0.0 ? std::sqrt(ev) : 0.0;
        }
        if (min_ev < -1e-8 * max_ev)
            throw ConfigError(
                "sign kernel is not positive definite on this session grid (min eigenvalue " +
                format_double(min_ev) + ")");
    }

    ~GaussianFieldSampler() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    GaussianFieldSampler(const GaussianFieldSampler&) = delete;
    GaussianFieldSampler& operator=(const GaussianFieldSampler&) = delete;

    void sample(std::mt19937_64& rng, std::span<double> field) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int k = 0; k < N_; ++k) {
            in_[k][0] = sqrt_lambda_[static_cast<std::size_t>(k)] * normal(rng);
            in_[k][1] = sqrt_lambda_[static_cast<std::size_t>(k)] * normal(rng);
        }
        fftw_execute(plan_);
        double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N_));
        for (int t = 0; t < T_; ++t) field[static_cast<std::size_t>(t)] = out_[t][0] * inv_sqrt_n;
    }

private:
    int T_;
    int N_;
    std::vector<double> sqrt_lambda_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

inline void append_price_2dp(std::string& out, std::int64_t cents) {
    out += std::to_string(cents / 100);
    out += '.';
    int frac = static_cast<int>(cents % 100);
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

inline GenManifest generate(const GenConfig& config, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    config.validate();
    fs::create_directories(out_dir);

    const int T = config.session.length();
    const int n = config.n_stocks;

    // Latent correlation from the target sign correlation via the arcsine law.
    auto rho = [&](int k) {
        if (k == 0) return 1.0;
        double target = config.kernel(static_cast<double>(k));
        return std::sin(1.5707963267948966 * target);
    };
    detail::GaussianFieldSampler sampler(T, rho);

    // Reusable time-of-day strings for every session second.
    std::vector<std::string> time_str(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
        time_str[static_cast<std::size_t>(t)] = format_time_of_day(config.session.open_second + t);

    GenManifest manifest;
    std::vector<std::unique_ptr<std::ofstream>> trades_out, quotes_out, refs_out;
    for (int i = 0; i < n; ++i) {
        char sym[8];
        std::snprintf(sym, sizeof(sym), "S%02d", i);
        manifest.symbols.emplace_back(sym);
        manifest.trades_files.push_back(out_dir / (manifest.symbols[i] + ".trades.csv"));
        manifest.quotes_files.push_back(out_dir / (manifest.symbols[i] + ".quotes.csv"));
        manifest.reference_files.push_back(out_dir / (manifest.symbols[i] + ".reference.csv"));
        auto open_tmp = [](const fs::path& p) {
            auto f = std::make_unique<std::ofstream>(p.string() + ".tmp",
                                                     std::ios::binary | std::ios::trunc);
            if (!*f) throw ConfigError("cannot write " + p.string());
            return f;
        };
        trades_out.push_back(open_tmp(manifest.trades_files[i]));
        quotes_out.push_back(open_tmp(manifest.quotes_files[i]));
        refs_out.push_back(open_tmp(manifest.reference_files[i]));
        *trades_out[i] << "day,time,price,volume\n";
        *quotes_out[i] << "day,time,bid,ask\n";
        *refs_out[i] << "day,time,seq,sign\n";
    }

    const double w = config.cross_weight;
    const double sw = std::sqrt(w);
    const double si = std::sqrt(1.0 - w);

    std::vector<double> factor(static_cast<std::size_t>(T));
    std::vector<double> idio(static_cast<std::size_t>(T));
    std::vector<std::int8_t> latent(static_cast<std::size_t>(T));
    std::vector<int> trade_count(static_cast<std::size_t>(T));
    std::vector<double> logm(static_cast<std::size_t>(T));
    std::string buf;

    Date day = config.start_day;
    for (int d = 0; d < config.n_days; ++d, day = next_day(day)) {
        const std::string day_str = format_date(day);

        if (w > 0.0) {
            std::mt19937_64 rng(detail::derive_seed(config.seed, static_cast<std::uint64_t>(d), 0,
                                                    ~std::uint64_t{0}));
            sampler.sample(rng, factor);
        }

        for (int i = 0; i < n; ++i) {
            auto stream = [&](std::uint64_t kind) {
                return std::mt19937_64(detail::derive_seed(
                    config.seed, static_cast<std::uint64_t>(d), kind,
                    static_cast<std::uint64_t>(i)));
            };

            // Latent per-second signs.
            if (w < 1.0) {
                std::mt19937_64 rng = stream(1);
                sampler.sample(rng, idio);
            }
            for (int t = 0; t < T; ++t) {
                double x = (w > 0.0 ? sw * factor[static_cast<std::size_t>(t)] : 0.0) +
                           (w < 1.0 ? si * idio[static_cast<std::size_t>(t)] : 0.0);
                latent[static_cast<std::size_t>(t)] = x >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
            }

            // Trade activity.
            {
                std::mt19937_64 rng = stream(2);
                if (config.trade_rate > 0.0) {
                    std::poisson_distribution<int> poisson(config.trade_rate);
                    for (int t = 0; t < T; ++t)
                        trade_count[static_cast<std::size_t>(t)] = poisson(rng);
                } else {
                    std::fill(trade_count.begin(), trade_count.end(), 0);
                }
            }

            // Midpoint path: diffusion plus impact of the aggregated sign.
            double base = config.base_price * (1.0 + 0.01 * i);
            {
                std::mt19937_64 rng = stream(3);
                std::normal_distribution<double> normal(0.0, 1.0);
                logm[0] = std::log(base);
                for (int t = 1; t < T; ++t) {
                    double eps_prev = trade_count[static_cast<std::size_t>(t - 1)] > 0
                                          ? static_cast<double>(latent[static_cast<std::size_t>(t - 1)])
                                          : 0.0;
                    logm[static_cast<std::size_t>(t)] =
                        logm[static_cast<std::size_t>(t - 1)] + config.noise_sigma * normal(rng) +
                        config.impact_per_sign * eps_prev;
                }
            }

            // Quotes: one per second around the current midpoint.
            buf.clear();
            for (int t = 0; t < T; ++t) {
                double mid = std::exp(logm[static_cast<std::size_t>(t)]);
                double bid = mid - config.half_spread;
                double ask = mid + config.half_spread;
                if (!(bid > 0.0))
                    throw ConfigError("generator: midpoint walked below the spread; "
                                      "raise base_price or lower noise_sigma/impact");
                buf += day_str;
                buf += ',';
                buf += time_str[static_cast<std::size_t>(t)];
                buf += ',';
                buf += format_double(bid);
                buf += ',';
                buf += format_double(ask);
                buf += '\n';
            }
            *quotes_out[i] << buf;

            // Trades on a one-cent grid: the price steps one tick in the
            // direction of each sign change, so the tick rule recovers the
            // planted signs. Reference labels carry the configured flip rate.
            std::mt19937_64 vol_rng = stream(4);
            std::mt19937_64 flip_rng = stream(5);
            std::geometric_distribution<int> extra_volume(
                config.mean_volume > 1.0 ? 1.0 / config.mean_volume : 1.0);
            std::bernoulli_distribution flip(config.label_flip_rate);

            std::int64_t price_cents =
                static_cast<std::int64_t>(std::llround(base * 100.0));
            std::int8_t last_sign = 0;
            buf.clear();
            std::string ref_buf;
            for (int t = 0; t < T; ++t) {
                int count = trade_count[static_cast<std::size_t>(t)];
                if (count == 0) continue;
                std::int8_t s = latent[static_cast<std::size_t>(t)];
                if (last_sign != 0 && s != last_sign) price_cents += s;
                last_sign = s;
                for (int k = 1; k <= count; ++k) {
                    std::int64_t volume = 1 + extra_volume(vol_rng);
                    buf += day_str;
                    buf += ',';
                    buf += time_str[static_cast<std::size_t>(t)];
                    buf += ',';
                    detail::append_price_2dp(buf, price_cents);
                    buf += ',';
                    buf += std::to_string(volume);
                    buf += '\n';

                    std::int8_t label = flip(flip_rng) ? static_cast<std::int8_t>(-s) : s;
                    ref_buf += day_str;
                    ref_buf += ',';
                    ref_buf += time_str[static_cast<std::size_t>(t)];
                    ref_buf += ',';
                    ref_buf += std::to_string(k);
                    ref_buf += ',';
                    ref_buf += (label > 0 ? 'B' : 'S');
                    ref_buf += '\n';
                }
            }
            *trades_out[i] << buf;
            *refs_out[i] << ref_buf;
        }
    }

    // Finish atomically.
    auto commit = [](std::unique_ptr<std::ofstream>& f, const fs::path& target) {
        f->close();
        fs::rename(target.string() + ".tmp", target);
    };
    for (int i = 0; i < n; ++i) {
        commit(trades_out[i], manifest.trades_files[i]);
        commit(quotes_out[i], manifest.quotes_files[i]);
        commit(refs_out[i], manifest.reference_files[i]);
    }

    // Sector metadata: contiguous blocks over up to three synthetic sectors.
    int n_sectors = std::min(3, n);
    static const char* kSectorNames[] = {"SEC_A", "SEC_B", "SEC_C"};
    std::string sectors = "symbol,sector\n";
    for (int i = 0; i < n; ++i) {
        int sec = n_sectors > 0 ? i * n_sectors / n : 0;
        sectors += manifest.symbols[i];
        sectors += ',';
        sectors += kSectorNames[sec];
        sectors += '\n';
    }
    manifest.sectors_file = out_dir / "sectors.csv";
    atomic_write_file(manifest.sectors_file, sectors);
    return manifest;
}

/// Cross sign correlator implied by a config at lag tau >= 1 (exact for the
/// latent signs; aggregated signs scale with the no-trade thinning).
inline double implied_cross_sign_correlation(const GenConfig& config, double tau) {
    double rho = std::sin(1.5707963267948966 * config.kernel(tau));
    return (2.0 / 3.141592653589793) * std::asin(config.cross_weight * rho);
}

/// Probability that a second carries at least one trade.
inline double trade_probability(const GenConfig& config) {
    return 1.0 - std::exp(-config.trade_rate);
}

}  // namespace xresp
