// xresp: batch analytics over trades-and-quotes tick data. Subcommands map
// onto the library modules: generate, signs, response, correlator, fit,
// matrix, noise. Configuration comes from flags or a TOML config file
// (--config) with one section per subcommand; flags override the file.
//
// Exit codes: 0 success, 1 computation error, 2 usage or I/O error.

#include "CLI11.hpp"
#include "xresp/xresp.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>

namespace fs = std::filesystem;
using namespace xresp;

namespace {

// ---------------------------------------------------------------------------
// Flag parsing helpers
// ---------------------------------------------------------------------------

LagGrid parse_lag_spec(const std::string& spec) {
    std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("lag spec must be start:end, got '" + spec + "'");
    int lo = std::stoi(spec.substr(0, colon));
    int hi = std::stoi(spec.substr(colon + 1));
    if (lo < 1 || hi < lo) throw ConfigError("bad lag range '" + spec + "'");
    return LagGrid::range(lo, hi);
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& spec) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string item =
            comma == std::string::npos ? spec.substr(pos) : spec.substr(pos, comma - pos);
        if (!item.empty()) {
            std::size_t colon = item.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 >= item.size())
                throw ConfigError("pair must be I:J, got '" + item + "'");
            out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("empty pair list");
    return out;
}

std::vector<int> parse_tau_list(const std::string& spec) {
    std::vector<int> taus;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string item =
            comma == std::string::npos ? spec.substr(pos) : spec.substr(pos, comma - pos);
        if (!item.empty()) taus.push_back(std::stoi(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    if (taus.empty()) throw ConfigError("empty tau list");
    return taus;
}

SignKernel parse_kernel_spec(const std::string& spec) {
    std::size_t colon = spec.find(':');
    std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::size_t pos = colon + 1;
        while (pos <= spec.size()) {
            std::size_t comma = spec.find(',', pos);
            std::string item =
                comma == std::string::npos ? spec.substr(pos) : spec.substr(pos, comma - pos);
            if (!item.empty()) args.push_back(std::stod(item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    SignKernel k;
    if (name == "powerlaw") {
        if (args.size() != 3)
            throw ConfigError("powerlaw kernel wants theta,tau0,gamma; got '" + spec + "'");
        k.type = KernelType::powerlaw;
        k.theta = args[0];
        k.tau0 = args[1];
        k.gamma = args[2];
    } else if (name == "exponential") {
        if (args.empty() || args.size() > 2)
            throw ConfigError("exponential kernel wants tau0[,amplitude]; got '" + spec + "'");
        k.type = KernelType::exponential;
        k.tau0 = args[0];
        k.theta = args.size() > 1 ? args[1] : 1.0;
    } else {
        throw ConfigError("unknown kernel '" + name + "' (powerlaw | exponential)");
    }
    k.validate();
    return k;
}

std::vector<Convention> parse_conventions(const std::string& spec) {
    if (spec == "inc0") return {Convention::inc0};
    if (spec == "exc0") return {Convention::exc0};
    if (spec == "both") return {Convention::inc0, Convention::exc0};
    throw ConfigError("convention must be inc0, exc0 or both; got '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Shared option blocks
// ---------------------------------------------------------------------------

struct SessionOpts {
    std::string open = "09:40:00";
    std::string close = "15:50:00";

    SessionWindow window() const {
        SessionWindow w{parse_time_of_day(open), parse_time_of_day(close)};
        w.validate();
        return w;
    }
};

void add_session_opts(CLI::App* cmd, SessionOpts& s) {
    cmd->add_option("--session-open", s.open, "Session open, HH:MM:SS (default 09:40:00)");
    cmd->add_option("--session-close", s.close, "Session close, HH:MM:SS (default 15:50:00)");
}

struct DataOpts {
    std::string data_dir;
    std::string output_dir;
    unsigned jobs = 1;
};

void add_data_opts(CLI::App* cmd, DataOpts& d) {
    cmd->add_option("--data-dir", d.data_dir, "Directory with SYM.trades.csv / SYM.quotes.csv")
        ->required();
    cmd->add_option("--output", d.output_dir, "Output directory")->required();
    cmd->add_option("--jobs", d.jobs, "Worker threads for pair-level work (default 1)");
}

/// Load each distinct symbol once, in parallel, keyed for deterministic reuse.
std::map<std::string, StockData> load_stocks(const std::set<std::string>& symbols,
                                             const fs::path& dir, const SessionWindow& window,
                                             unsigned jobs) {
    std::vector<std::string> order(symbols.begin(), symbols.end());
    std::vector<StockData> loaded(order.size());
    parallel_for(order.size(), jobs,
                 [&](std::size_t k) { loaded[k] = load_stock(dir, order[k], window); });
    std::map<std::string, StockData> out;
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = std::move(loaded[k]);
    return out;
}

std::vector<std::pair<std::string, std::string>> resolve_pairs(const std::string& pairs_spec,
                                                               const std::string& symbols_spec,
                                                               bool include_self) {
    if (!pairs_spec.empty()) return parse_pairs(pairs_spec);
    if (symbols_spec.empty()) throw ConfigError("need --pairs or --symbols");
    std::vector<std::string> syms;
    std::size_t pos = 0;
    while (pos <= symbols_spec.size()) {
        std::size_t comma = symbols_spec.find(',', pos);
        std::string item = comma == std::string::npos ? symbols_spec.substr(pos)
                                                      : symbols_spec.substr(pos, comma - pos);
        if (!item.empty()) syms.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (syms.empty()) throw ConfigError("empty symbol list");
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string& i : syms)
        for (const std::string& j : syms)
            if (include_self || i != j) out.emplace_back(i, j);
    return out;
}

std::string pair_file_stem(const std::string& i, const std::string& j) { return i + "_" + j; }

// ---------------------------------------------------------------------------
// Subcommand: generate
// ---------------------------------------------------------------------------

struct GenerateOpts {
    std::string output_dir;
    GenConfig config;
    std::string kernel_spec = "powerlaw:0.5,5,1.2";
    std::string start_day = "2008-01-01";
    SessionOpts session;
};

int run_generate(const GenerateOpts& opt) {
    GenConfig cfg = opt.config;
    cfg.kernel = parse_kernel_spec(opt.kernel_spec);
    cfg.start_day = parse_date(opt.start_day);
    cfg.session = opt.session.window();
    GenManifest manifest = generate(cfg, opt.output_dir);
    std::cout << "generated " << manifest.symbols.size() << " stocks x " << cfg.n_days
              << " days under " << opt.output_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: signs
// ---------------------------------------------------------------------------

struct SignsOpts {
    DataOpts data;
    SessionOpts session;
    std::string symbols;
    std::string reference_dir;
};

int run_signs(const SignsOpts& opt) {
    SessionWindow window = opt.session.window();
    std::vector<std::string> syms;
    for (const auto& [i, j] : resolve_pairs("", opt.symbols, true))
        if (i == j) syms.push_back(i);
    fs::create_directories(opt.data.output_dir);

    // Check reference files up front so a bad flag fails before any work.
    if (!opt.reference_dir.empty())
        for (const std::string& sym : syms)
            if (!fs::exists(reference_path(opt.reference_dir, sym)))
                throw ConfigError("missing reference file: " +
                                  reference_path(opt.reference_dir, sym).string());

    std::vector<std::string> outputs(syms.size());
    parallel_for(syms.size(), opt.data.jobs, [&](std::size_t k) {
        const std::string& sym = syms[k];
        StockData stock = load_stock(opt.data.data_dir, sym, window);
        fs::path out_dir(opt.data.output_dir);
        atomic_write_file(out_dir / (sym + ".signs.number.csv"),
                          sign_series_to_csv(stock.signs_number, window));
        atomic_write_file(out_dir / (sym + ".signs.volume.csv"),
                          sign_series_to_csv(stock.signs_volume, window));

        if (!opt.reference_dir.empty()) {
            std::string ref_csv = read_file(reference_path(opt.reference_dir, sym));
            std::vector<PerTradeSignSeries> reference = parse_reference_signs(ref_csv, window);

            AccuracyReport per_trade = accuracy_per_trade(stock.per_trade_signs, reference);

            // Per-second comparison against the empirical labels aggregated
            // by number and by volume imbalance, on common days.
            std::map<Date, const PerTradeSignSeries*> ref_by_day;
            for (const PerTradeSignSeries& r : reference) ref_by_day[r.day] = &r;
            std::vector<SignSeries> theo, ref_num, ref_vol;
            for (std::size_t d = 0; d < stock.days.size(); ++d) {
                auto it = ref_by_day.find(stock.days[d]);
                if (it == ref_by_day.end()) continue;
                ReferenceAggregates agg =
                    aggregate_reference(*it->second, stock.trades[d], window);
                theo.push_back(stock.signs_number[d]);
                ref_num.push_back(std::move(agg.number));
                ref_vol.push_back(std::move(agg.volume));
            }
            if (theo.empty()) throw DataError("reference covers no common day for " + sym);
            PerSecondAccuracy per_second = accuracy_per_second(theo, ref_num, ref_vol);

            nlohmann::json j;
            j["symbol"] = sym;
            j["per_trade"] = accuracy_to_json(per_trade);
            j["per_second"]["number"] = accuracy_to_json(per_second.vs_number);
            j["per_second"]["volume"] = accuracy_to_json(per_second.vs_volume);
            j["per_second"]["n_zero_theoretical"] = per_second.n_zero_theoretical;
            atomic_write_file(out_dir / (sym + ".accuracy.json"), j.dump(2) + "\n");
            outputs[k] = sym + ": per-trade accuracy " + format_double(per_trade.accuracy);
        } else {
            outputs[k] = sym + ": sign series written";
        }
    });
    for (const std::string& line : outputs) std::cout << line << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommands: response / correlator
// ---------------------------------------------------------------------------

struct CurveOpts {
    DataOpts data;
    SessionOpts session;
    std::string pairs;
    std::string symbols;
    std::string lag_spec = "1:1000";
    std::string convention = "inc0";
    bool only0 = false;
    bool market_average_flag = false;
    bool exclude_both = false;  // correlator only
    int histogram_tau = 0;      // response only; 0 = off
    int histogram_bins = 201;
};

void add_curve_opts(CLI::App* cmd, CurveOpts& c) {
    add_data_opts(cmd, c.data);
    add_session_opts(cmd, c.session);
    cmd->add_option("--pairs", c.pairs, "Ordered pairs I:J,K:L (self pairs allowed)");
    cmd->add_option("--symbols", c.symbols, "Symbols; expands to all ordered pairs incl. self");
    cmd->add_option("--lags", c.lag_spec, "Lag grid start:end (default 1:1000)");
    cmd->add_option("--convention", c.convention, "inc0 | exc0 | both (default inc0)");
    cmd->add_flag("--only0", c.only0, "Also emit the inc0 - exc0 difference curves");
}

int run_curves(const CurveOpts& opt, CurveKind kind) {
    SessionWindow window = opt.session.window();
    LagGrid grid = parse_lag_spec(opt.lag_spec);
    std::vector<Convention> convs = parse_conventions(opt.convention);
    if (opt.only0 && convs.size() != 2)
        throw ConfigError("--only0 needs --convention both");
    auto pairs = resolve_pairs(opt.pairs, opt.symbols, true);

    std::set<std::string> symbols;
    for (const auto& [i, j] : pairs) {
        symbols.insert(i);
        symbols.insert(j);
    }
    auto stocks = load_stocks(symbols, opt.data.data_dir, window, opt.data.jobs);
    fs::create_directories(opt.data.output_dir);
    fs::path out_dir(opt.data.output_dir);
    const char* kind_name = kind == CurveKind::response ? "response" : "correlator";
    ZeroPolicy policy =
        opt.exclude_both ? ZeroPolicy::condition_on_both : ZeroPolicy::condition_on_j;

    // One task per (pair, convention); slot-indexed results keep the output
    // independent of scheduling.
    struct Task {
        std::string i, j;
        Convention conv;
    };
    std::vector<Task> tasks;
    for (const auto& [i, j] : pairs)
        for (Convention conv : convs) tasks.push_back({i, j, conv});
    std::vector<ResponseCurve> curves(tasks.size());
    parallel_for(tasks.size(), opt.data.jobs, [&](std::size_t k) {
        const Task& t = tasks[k];
        const StockData& si = stocks.at(t.i);
        const StockData& sj = stocks.at(t.j);
        curves[k] = kind == CurveKind::response
                        ? pair_response(si, sj, grid, t.conv)
                        : pair_correlator(si, sj, grid, t.conv, policy);
    });

    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const Task& t = tasks[k];
        fs::path file = out_dir / (pair_file_stem(t.i, t.j) + "." + kind_name + "." +
                                   to_string(t.conv) + ".csv");
        atomic_write_file(file, curve_to_csv(curves[k]));
    }

    if (opt.only0) {
        for (const auto& [i, j] : pairs) {
            const ResponseCurve* inc = nullptr;
            const ResponseCurve* exc = nullptr;
            for (std::size_t k = 0; k < tasks.size(); ++k) {
                if (tasks[k].i != i || tasks[k].j != j) continue;
                (tasks[k].conv == Convention::inc0 ? inc : exc) = &curves[k];
            }
            ResponseCurve diff = only_zero(*inc, *exc);
            fs::path file = out_dir / (pair_file_stem(i, j) + "." + kind_name + ".only0.csv");
            atomic_write_file(file, curve_to_csv(diff));
        }
    }

    if (opt.market_average_flag) {
        std::vector<std::string> sym_order(symbols.begin(), symbols.end());
        for (Convention conv : convs) {
            std::vector<ResponseCurve> of_conv;
            for (std::size_t k = 0; k < tasks.size(); ++k)
                if (tasks[k].conv == conv) of_conv.push_back(curves[k]);
            std::vector<std::string> warnings;
            ResponseCurve avg = market_average(of_conv, sym_order, &warnings);
            for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
            fs::path file =
                out_dir / (std::string("market_average.") + kind_name + "." + to_string(conv) +
                           ".csv");
            atomic_write_file(file, curve_to_csv(avg));
        }
    }

    if (kind == CurveKind::response && opt.histogram_tau > 0) {
        for (Convention conv : convs) {
            // Pool the signed returns of every listed pair at the given lag.
            std::vector<AlignedPair> aligned;
            aligned.reserve(pairs.size());
            for (const auto& [i, j] : pairs)
                aligned.push_back(align_pair(stocks.at(i), stocks.at(j)));
            std::vector<PairSeries> series;
            series.reserve(aligned.size());
            for (const AlignedPair& a : aligned)
                series.push_back({std::span<const MidpointSeries* const>(a.mids_i),
                                  std::span<const SignSeries* const>(a.signs_j)});
            SignedReturnHistogram hist =
                signed_return_histogram(series, opt.histogram_tau, opt.histogram_bins, conv);
            hist.shift = estimate_symmetrizing_shift(hist);
            std::string stem = "market.hist." + std::string(to_string(conv)) + ".tau" +
                               std::to_string(opt.histogram_tau);
            atomic_write_file(out_dir / (stem + ".csv"), histogram_to_csv(hist));
            nlohmann::json j;
            j["tau"] = hist.tau;
            j["convention"] = to_string(conv);
            j["shift"] = hist.shift;
            j["bin_width"] = hist.bin_width();
            j["n_events"] = hist.n_events;
            atomic_write_file(out_dir / (stem + ".json"), j.dump(2) + "\n");
            std::cout << "symmetrizing shift (" << to_string(conv) << ", tau "
                      << opt.histogram_tau << "): " << format_double(hist.shift) << "\n";
        }
    }

    std::cout << "wrote " << tasks.size() << " " << kind_name << " curves to "
              << opt.data.output_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: fit
// ---------------------------------------------------------------------------

struct FitOpts {
    std::string curve_file;
    std::string init_spec;
    std::string output_dir;
};

int run_fit(const FitOpts& opt) {
    ResponseCurve curve = curve_from_csv(read_file(opt.curve_file));
    curve.kind = CurveKind::sign_correlator;
    std::optional<PowerLawParams> init;
    if (!opt.init_spec.empty()) {
        PowerLawParams p;
        if (std::sscanf(opt.init_spec.c_str(), "%lf,%lf,%lf", &p.theta, &p.tau0, &p.gamma) != 3)
            throw ConfigError("--init wants theta,tau0,gamma");
        init = p;
    }
    PowerLawFit fit = fit_powerlaw(curve, init);
    std::string json = fit_to_json(fit);
    if (!opt.output_dir.empty()) {
        fs::create_directories(opt.output_dir);
        fs::path stem = fs::path(opt.curve_file).stem();
        atomic_write_file(fs::path(opt.output_dir) / (stem.string() + ".fit.json"), json);
    }
    std::cout << json;
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: matrix
// ---------------------------------------------------------------------------

struct MatrixOpts {
    DataOpts data;
    SessionOpts session;
    std::string symbols;
    std::string sectors_file;
    std::string taus_spec = "1,2,60,300,1800,7200";
    std::string convention = "inc0";
    std::string format = "csv";
};

int run_matrix(const MatrixOpts& opt) {
    SessionWindow window = opt.session.window();
    std::vector<int> taus = parse_tau_list(opt.taus_spec);
    std::vector<Convention> convs = parse_conventions(opt.convention);
    SectorMeta meta = load_sector_meta(read_file(opt.sectors_file));
    auto pairs = resolve_pairs("", opt.symbols, true);

    std::set<std::string> symbols;
    for (const auto& [i, j] : pairs) symbols.insert(i);
    auto stocks = load_stocks(symbols, opt.data.data_dir, window, opt.data.jobs);
    fs::create_directories(opt.data.output_dir);
    LagGrid grid{std::vector<int>(taus.begin(), taus.end())};

    for (Convention conv : convs) {
        std::vector<ResponseCurve> curves(pairs.size());
        parallel_for(pairs.size(), opt.data.jobs, [&](std::size_t k) {
            curves[k] = pair_response(stocks.at(pairs[k].first), stocks.at(pairs[k].second),
                                      grid, conv);
        });
        for (int tau : taus) {
            MarketResponseMatrix m = build_matrix(curves, tau, meta);
            std::string stem =
                "matrix." + std::string(to_string(conv)) + ".tau" + std::to_string(tau);
            if (opt.format == "csv" || opt.format == "both")
                atomic_write_file(fs::path(opt.data.output_dir) / (stem + ".csv"),
                                  matrix_to_csv(m));
            if (opt.format == "json" || opt.format == "both")
                atomic_write_file(fs::path(opt.data.output_dir) / (stem + ".json"),
                                  matrix_to_json(m));
        }
    }
    std::cout << "wrote matrices for " << taus.size() << " lags to " << opt.data.output_dir
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: noise
// ---------------------------------------------------------------------------

struct NoiseOpts {
    DataOpts data;
    SessionOpts session;
    std::string pairs;
    std::string symbols;
    std::string lag_spec = "1:1000";
    std::string convention = "inc0";
};

int run_noise(const NoiseOpts& opt) {
    SessionWindow window = opt.session.window();
    LagGrid grid = parse_lag_spec(opt.lag_spec);
    std::vector<Convention> convs = parse_conventions(opt.convention);
    auto pairs = resolve_pairs(opt.pairs, opt.symbols, false);

    std::set<std::string> symbols;
    for (const auto& [i, j] : pairs) {
        symbols.insert(i);
        symbols.insert(j);
    }
    auto stocks = load_stocks(symbols, opt.data.data_dir, window, opt.data.jobs);
    fs::create_directories(opt.data.output_dir);

    struct Task {
        std::string i, j;
        Convention conv;
    };
    std::vector<Task> tasks;
    for (const auto& [i, j] : pairs)
        for (Convention conv : convs) tasks.push_back({i, j, conv});
    std::vector<NoiseCurve> curves(tasks.size());
    parallel_for(tasks.size(), opt.data.jobs, [&](std::size_t k) {
        const Task& t = tasks[k];
        AlignedPair a = align_pair(stocks.at(t.i), stocks.at(t.j));
        curves[k] = response_noise(std::span<const MidpointSeries* const>(a.mids_i),
                                   std::span<const SignSeries* const>(a.signs_j), grid, t.conv);
        curves[k].stock_i = t.i;
        curves[k].stock_j = t.j;
    });
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const Task& t = tasks[k];
        fs::path file = fs::path(opt.data.output_dir) /
                        (pair_file_stem(t.i, t.j) + ".noise." + to_string(t.conv) + ".csv");
        atomic_write_file(file, noise_to_csv(curves[k]));
    }
    std::cout << "wrote " << tasks.size() << " noise curves to " << opt.data.output_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-response analytics over trades-and-quotes tick data"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; one section per subcommand");

    GenerateOpts gen;
    CLI::App* cmd_generate = app.add_subcommand("generate", "Generate synthetic tick data");
    cmd_generate->add_option("--output", gen.output_dir, "Output directory")->required();
    cmd_generate->add_option("--stocks", gen.config.n_stocks, "Number of stocks (default 2)");
    cmd_generate->add_option("--days", gen.config.n_days, "Number of days (default 5)");
    cmd_generate->add_option("--trade-rate", gen.config.trade_rate,
                             "Mean trades per second per stock (default 0.5)");
    cmd_generate->add_option("--kernel", gen.kernel_spec,
                             "Sign kernel: powerlaw:theta,tau0,gamma | exponential:tau0[,amp]");
    cmd_generate->add_option("--cross-weight", gen.config.cross_weight,
                             "Shared-factor loading in [0,1] (default 0.3)");
    cmd_generate->add_option("--impact", gen.config.impact_per_sign,
                             "Planted log-return drift per unit sign (default 0)");
    cmd_generate->add_option("--noise-sigma", gen.config.noise_sigma,
                             "Per-second midpoint diffusion (default 1e-4)");
    cmd_generate->add_option("--flip-rate", gen.config.label_flip_rate,
                             "Reference label corruption rate (default 0)");
    cmd_generate->add_option("--seed", gen.config.seed, "RNG seed (default 1)");
    cmd_generate->add_option("--base-price", gen.config.base_price, "Base price (default 100)");
    cmd_generate->add_option("--half-spread", gen.config.half_spread,
                             "Quote half-spread (default 0.01)");
    cmd_generate->add_option("--mean-volume", gen.config.mean_volume,
                             "Mean trade volume (default 100)");
    cmd_generate->add_option("--start-day", gen.start_day, "First day (default 2008-01-01)");
    add_session_opts(cmd_generate, gen.session);

    SignsOpts signs;
    CLI::App* cmd_signs = app.add_subcommand("signs", "Classify and aggregate trade signs");
    add_data_opts(cmd_signs, signs.data);
    add_session_opts(cmd_signs, signs.session);
    cmd_signs->add_option("--symbols", signs.symbols, "Symbols to process")->required();
    cmd_signs->add_option("--reference", signs.reference_dir,
                          "Directory with SYM.reference.csv label files; enables accuracy");

    CurveOpts resp;
    CLI::App* cmd_response = app.add_subcommand("response", "Price response curves");
    add_curve_opts(cmd_response, resp);
    cmd_response->add_flag("--market-average", resp.market_average_flag,
                           "Also emit the doubly averaged market response");
    cmd_response->add_option("--histogram-tau", resp.histogram_tau,
                             "Emit the signed-return histogram and shift at this lag");
    cmd_response->add_option("--histogram-bins", resp.histogram_bins,
                             "Histogram bin count (default 201)");

    CurveOpts corr;
    CLI::App* cmd_correlator = app.add_subcommand("correlator", "Trade sign correlators");
    add_curve_opts(cmd_correlator, corr);
    cmd_correlator->add_flag("--exclude-both", corr.exclude_both,
                             "exc0 conditions on both signs, not only eps_j(t)");
    cmd_correlator->add_flag("--market-average", corr.market_average_flag,
                             "Also emit the doubly averaged correlator");

    FitOpts fit;
    CLI::App* cmd_fit = app.add_subcommand("fit", "Power-law fit of a correlator curve");
    cmd_fit->add_option("--curve", fit.curve_file, "Curve CSV (tau,value,count,stderr)")
        ->required();
    cmd_fit->add_option("--init", fit.init_spec, "Optional seed theta,tau0,gamma");
    cmd_fit->add_option("--output", fit.output_dir, "Directory for <curve>.fit.json");

    MatrixOpts matrix;
    CLI::App* cmd_matrix = app.add_subcommand("matrix", "Market response matrices");
    add_data_opts(cmd_matrix, matrix.data);
    add_session_opts(cmd_matrix, matrix.session);
    cmd_matrix->add_option("--symbols", matrix.symbols, "Symbols spanning the matrix")
        ->required();
    cmd_matrix->add_option("--sectors", matrix.sectors_file, "Sector metadata file")->required();
    cmd_matrix->add_option("--taus", matrix.taus_spec,
                           "Comma-separated lags (default 1,2,60,300,1800,7200)");
    cmd_matrix->add_option("--convention", matrix.convention, "inc0 | exc0 | both");
    cmd_matrix->add_option("--format", matrix.format, "csv | json | both (default csv)");

    NoiseOpts noise;
    CLI::App* cmd_noise = app.add_subcommand("noise", "Odd/even-day response noise");
    add_data_opts(cmd_noise, noise.data);
    add_session_opts(cmd_noise, noise.session);
    cmd_noise->add_option("--pairs", noise.pairs, "Ordered pairs I:J,K:L");
    cmd_noise->add_option("--symbols", noise.symbols, "Symbols; all ordered pairs i != j");
    cmd_noise->add_option("--lags", noise.lag_spec, "Lag grid start:end (default 1:1000)");
    cmd_noise->add_option("--convention", noise.convention, "inc0 | exc0 | both");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_generate->parsed()) return run_generate(gen);
        if (cmd_signs->parsed()) return run_signs(signs);
        if (cmd_response->parsed()) return run_curves(resp, CurveKind::response);
        if (cmd_correlator->parsed()) return run_curves(corr, CurveKind::sign_correlator);
        if (cmd_fit->parsed()) return run_fit(fit);
        if (cmd_matrix->parsed()) return run_matrix(matrix);
        if (cmd_noise->parsed()) return run_noise(noise);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
