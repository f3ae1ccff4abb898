#include "cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairprice/error.hpp"
#include "fairprice/fairtests.hpp"
#include "fairprice/ingest.hpp"
#include "fairprice/mrr.hpp"

namespace fairprice::cli {

namespace fs = std::filesystem;

void Manifest::add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
}

std::string Manifest::str() const {
    std::string out = "# fairprice run manifest\n";
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "manifest line without '=': " + line);
        m.add(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

std::vector<std::string> Manifest::values(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
        if (k == key) out.push_back(v);
    return out;
}

namespace {

/// Data problems (unreadable input, bad rows) as opposed to usage errors.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    if (!std::isfinite(v)) return "NA";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string num(std::optional<double> v) { return v ? num(*v) : "NA"; }

std::int64_t seconds_to_ns(double s) { return std::llround(s * kNanosPerSecond); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

Manifest start_manifest(const std::string& command, const std::vector<std::string>& args) {
    Manifest m;
    m.add("tool", "fairprice");
    m.add("version", kVersion);
    m.add("command", command);
    for (const auto& a : args) m.add("argv", a);
    return m;
}

void add_config(Manifest& m, const AssetConfig& c) {
    std::istringstream in(format_asset_config(c));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        m.add("config." + c.asset_id + "." + line.substr(0, eq), line.substr(eq + 1));
    }
}

fs::path sidecar(const fs::path& p, const std::string& suffix) { return fs::path(p.string() + suffix); }

// ---------------------------------------------------------------------------
// Input loading shared by fairtest and response.

struct LoadedSession {
    fs::path path;
    AssetConfig config;
    EventStream stream;
};

std::vector<LoadedSession> load_inputs(const std::vector<std::string>& inputs, const std::string& config_path,
                                       std::optional<double> grid_dt_s) {
    std::optional<AssetConfig> shared;
    try {
        if (!config_path.empty()) shared = load_asset_config(config_path);
    } catch (const Error& e) {
        throw DataError(config_path + ": " + e.what());
    }
    std::vector<LoadedSession> out;
    for (const auto& input : inputs) {
        try {
            AssetConfig cfg;
            if (shared) {
                cfg = *shared;
                if (config_path.empty() || cfg.asset_id == fs::path(config_path).stem().string())
                    cfg.asset_id.clear();
            } else if (fs::exists(sidecar(input, ".config"))) {
                cfg = load_asset_config(sidecar(input, ".config"));
            }
            if (grid_dt_s) {
                cfg.grid.dt_ns = seconds_to_ns(*grid_dt_s);
                if (cfg.grid.dt_ns <= 0) throw UsageError("--grid-dt must be positive");
            }
            if (cfg.asset_id.empty()) cfg.asset_id = fs::path(input).stem().string();
            EventStream stream = load_session(input, cfg);
            out.push_back(LoadedSession{input, cfg, std::move(stream)});
        } catch (const Error& e) {
            throw DataError(input + ": " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// fairtest

constexpr std::array<const char*, 3> kStatNames{"Delta", "DeltaA", "DeltaB"};

enum class Verdict { Pass, Fail, NotAvailable };

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotAvailable: return "NA";
    }
    return "NA";
}

/// PASS when the statistic is smaller than one tick with margin 4 SE.
Verdict judge(const Accumulator& acc, const PriceScale& scale, double tick) {
    if (acc.count() < 2) return Verdict::NotAvailable;
    const StatResult r = summarize(acc, scale, tick);
    return std::abs(r.estimate) + 4.0 * *r.std_error < tick ? Verdict::Pass : Verdict::Fail;
}

struct AssetStats {
    PriceScale scale;
    std::int64_t tick_steps = 0;
    std::array<std::array<Accumulator, 5>, 3> acc;
    Accumulator spread;
    std::int64_t orders = 0;
    std::size_t sessions = 0;
};

struct SessionStats {
    std::array<std::array<Accumulator, 5>, 3> acc;
};

SessionStats compute_session(const LoadedSession& s) {
    SessionStats out;
    const TimeWindow window = s.config.grid.trimmed(s.stream.session());
    const auto& conds = ConditioningEvent::standard();
    for (std::size_t i = 0; i < conds.size(); ++i) {
        out.acc[0][i] = accumulate_delta_i(s.stream, s.config.grid, conds[i]);
        out.acc[1][i] = accumulate_delta_side(s.stream, Side::Ask, conds[i], window);
        out.acc[2][i] = accumulate_delta_side(s.stream, Side::Bid, conds[i], window);
    }
    return out;
}

std::int64_t count_trades(const EventStream& s, const TimeWindow& w) {
    return std::count_if(s.events().begin(), s.events().end(),
                         [&](const MarketEvent& ev) { return ev.is_trade() && w.contains(ev.ts_ns); });
}

void check_same_grid(const AssetStats& a, const EventStream& s) {
    if (a.scale != s.scale() || a.tick_steps != s.tick_steps())
        throw DataError("sessions of asset " + s.asset_id() + " disagree on tick or price step");
}

struct FairtestOpts {
    std::vector<std::string> inputs;
    std::string config;
    std::optional<double> grid_dt;
    std::string out = "fairtest.csv";
};

int cmd_fairtest(const FairtestOpts& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto sessions = load_inputs(o.inputs, o.config, o.grid_dt);

    std::map<std::string, AssetStats> assets;
    std::string session_rows = "asset,session,statistic,event,estimate,count,stderr,ticks\n";
    Manifest manifest = start_manifest("fairtest", args);
    for (const auto& s : sessions) {
        manifest.add("input", s.path.string());
        add_config(manifest, s.config);
        const SessionStats st = compute_session(s);
        auto [it, fresh] = assets.try_emplace(s.stream.asset_id());
        AssetStats& a = it->second;
        if (fresh) {
            a.scale = s.stream.scale();
            a.tick_steps = s.stream.tick_steps();
        }
        check_same_grid(a, s.stream);
        ++a.sessions;
        a.orders += count_trades(s.stream, s.config.grid.trimmed(s.stream.session()));
        a.spread.merge(accumulate_spread(s.stream, s.config.grid));
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < 5; ++i) {
                a.acc[k][i].merge(st.acc[k][i]);
                const Accumulator& acc = st.acc[k][i];
                session_rows += s.stream.asset_id() + "," + s.path.filename().string() + "," + kStatNames[k] + ",E" +
                                std::to_string(i) + ",";
                if (acc.count() == 0) {
                    session_rows += "NA,0,NA,NA\n";
                } else {
                    const StatResult r = summarize(acc, s.stream.scale(), s.stream.tick());
                    session_rows += num(r.estimate) + "," + std::to_string(r.count) + "," + num(r.std_error) + "," +
                                    num(r.estimate_in_ticks) + "\n";
                }
            }
    }

    std::string table = "asset,statistic,tick,spread_over_tick,n_orders";
    for (const char* prefix : {"", "n_", "se_", "ticks_"})
        for (int i = 0; i < 5; ++i) table += std::string(",") + prefix + "E" + std::to_string(i);
    table += ",status\n";

    std::size_t passes = 0, fails = 0;
    {
        char head[160];
        std::snprintf(head, sizeof head, "%-11s %-9s %-11s %-11s %-11s %-11s %-11s %s\n", "asset", "stat", "E0", "E1",
                      "E2", "E3", "E4", "status");
        out << head;
    }
    for (const auto& [asset, a] : assets) {
        const double tick = a.scale.to_currency(a.tick_steps);
        const double spread_ticks =
            a.spread.count() ? a.spread.mean_steps() / static_cast<double>(a.tick_steps) : std::nan("");
        for (std::size_t k = 0; k < 3; ++k) {
            std::array<std::string, 5> est, cnt, se, ticks;
            Verdict row = Verdict::NotAvailable;
            for (std::size_t i = 0; i < 5; ++i) {
                const Accumulator& acc = a.acc[k][i];
                cnt[i] = std::to_string(acc.count());
                if (acc.count() == 0) {
                    est[i] = se[i] = ticks[i] = "NA";
                } else {
                    const StatResult r = summarize(acc, a.scale, tick);
                    est[i] = num(r.estimate);
                    se[i] = num(r.std_error);
                    ticks[i] = num(r.estimate_in_ticks);
                }
                const Verdict v = judge(acc, a.scale, tick);
                if (v == Verdict::Fail) row = Verdict::Fail;
                else if (v == Verdict::Pass && row == Verdict::NotAvailable) row = Verdict::Pass;
            }
            if (row == Verdict::Pass) ++passes;
            if (row == Verdict::Fail) ++fails;
            table += asset + "," + kStatNames[k] + "," + num(tick) + "," + num(spread_ticks) + "," +
                     std::to_string(a.orders);
            for (const auto* col : {&est, &cnt, &se, &ticks})
                for (const auto& v : *col) table += "," + v;
            table += std::string(",") + verdict_name(row) + "\n";

            char line[160];
            std::snprintf(line, sizeof line, "%-11s %-9s", asset.c_str(), kStatNames[k]);
            out << line;
            for (std::size_t i = 0; i < 5; ++i) {
                if (a.acc[k][i].count() == 0) std::snprintf(line, sizeof line, " %-11s", "NA");
                else std::snprintf(line, sizeof line, " %-11.4g", summarize(a.acc[k][i], a.scale, tick).estimate);
                out << line;
            }
            out << " " << verdict_name(row) << "\n";
        }
    }
    const char* summary = fails ? "FAIL" : (passes ? "PASS" : "N/A");
    out << "summary: " << summary << " (" << assets.size() << " asset(s), " << sessions.size() << " session(s))\n";
    if (fails) err << "warning: at least one statistic is not significantly below one tick\n";

    const fs::path table_path = o.out;
    write_text(table_path, table);
    write_text(sidecar(table_path, ".sessions.csv"), session_rows);
    manifest.add("output", table_path.string());
    manifest.add("output", sidecar(table_path, ".sessions.csv").string());
    manifest.add("result.summary", summary);
    write_text(sidecar(table_path, ".manifest"), manifest.str());
    return kOk;
}

// ---------------------------------------------------------------------------
// response

struct ResponseOpts {
    std::vector<std::string> inputs;
    std::string config;
    std::string deltas;
    std::string out = "response";
};

std::vector<double> parse_deltas(const std::string& text) {
    if (text.empty()) return default_response_deltas();
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const char* b = item.data();
        const char* e = item.data() + item.size();
        while (b < e && *b == ' ') ++b;
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || ptr != e || !(v > 0.0)) throw UsageError("bad --deltas entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--deltas is empty");
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw UsageError("--deltas has duplicates");
    return out;
}

int cmd_response(const ResponseOpts& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const std::vector<double> deltas = parse_deltas(o.deltas);
    const std::vector<std::int64_t> deltas_ns = deltas_to_ns(deltas);
    const auto sessions = load_inputs(o.inputs, o.config, std::nullopt);

    struct PerAsset {
        PriceScale scale;
        std::int64_t tick_steps = 0;
        std::optional<ResponseAccumulator> side[2];
    };
    std::map<std::string, PerAsset> assets;
    Manifest manifest = start_manifest("response", args);
    for (const auto& s : sessions) {
        manifest.add("input", s.path.string());
        add_config(manifest, s.config);
        auto [it, fresh] = assets.try_emplace(s.stream.asset_id());
        if (fresh) {
            it->second.scale = s.stream.scale();
            it->second.tick_steps = s.stream.tick_steps();
        } else if (it->second.scale != s.stream.scale() || it->second.tick_steps != s.stream.tick_steps()) {
            throw DataError("sessions of asset " + s.stream.asset_id() + " disagree on tick or price step");
        }
        const TimeWindow window = s.config.grid.trimmed(s.stream.session());
        for (Side side : {Side::Ask, Side::Bid}) {
            auto acc = accumulate_response(s.stream, side, deltas_ns, window);
            auto& slot = it->second.side[side == Side::Ask ? 0 : 1];
            if (slot) slot->merge(acc);
            else slot = std::move(acc);
        }
    }

    for (Side side : {Side::Ask, Side::Bid}) {
        std::string csv = "delta_s,value,count,stderr,asset\n";
        for (const auto& [asset, a] : assets) {
            const auto& acc = *a.side[side == Side::Ask ? 0 : 1];
            if (acc.trades == 0) {
                err << "warning: no " << side_name(side) << " trades for " << asset << "\n";
                continue;
            }
            const ResponseCurve curve = summarize_response(acc, a.scale);
            double worst = 0.0;
            for (const auto& p : curve.points) {
                csv += num(p.delta_s) + "," + num(p.value) + "," + std::to_string(p.count) + "," +
                       num(p.std_error) + "," + asset + "\n";
                worst = std::max(worst, std::abs(p.value));
            }
            out << asset << " " << side_name(side) << ": " << curve.points.size() << " lags, " << curve.trades
                << " trades, max |variation| " << num(worst) << " (tick " << num(a.scale.to_currency(a.tick_steps))
                << ")\n";
        }
        const fs::path path = o.out + "_" + side_name(side) + ".csv";
        write_text(path, csv);
        manifest.add("output", path.string());
    }
    for (const auto& [asset, a] : assets) manifest.add("tick." + asset, num(a.scale.to_currency(a.tick_steps)));
    write_text(o.out + ".manifest", manifest.str());
    return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    double rho = 0.5;
    double theta = 1.0;
    double noise_std = 0.0;
    double p0 = 100.0;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    double interval_s = 1.0;
    double tick = 0.0;
    double price_step = 0.0;
    std::string asset = "MRR";
    std::string out;
};

int cmd_simulate(const SimulateOpts& o, const std::vector<std::string>& args, std::ostream& out) {
    const mrr::MrrParams params{o.rho, o.theta, o.p0, o.noise_std, o.seed};
    try {
        params.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (o.n < 1) throw UsageError("--n must be >= 1");
    if (!(o.interval_s > 0.0)) throw UsageError("--interval-s must be positive");
    mrr::EmissionSpec spec{o.asset, seconds_to_ns(o.interval_s), o.tick, o.price_step};
    mrr::MrrPath path;
    try {
        path = mrr::simulate(params, o.n, spec);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    const fs::path csv = o.out;
    save_session(csv, path.stream);
    const AssetConfig cfg = config_for(path.stream, GridSpec::untrimmed(10 * kNanosPerSecond));
    save_asset_config(sidecar(csv, ".config"), cfg);

    Manifest m = start_manifest("simulate", args);
    m.add("seed", std::to_string(o.seed));
    add_config(m, cfg);
    m.add("output", csv.string());
    m.add("output", sidecar(csv, ".config").string());
    m.add("result.trades", std::to_string(o.n));
    m.add("result.events", std::to_string(path.stream.size()));
    write_text(sidecar(csv, ".manifest"), m.str());

    out << "wrote " << o.n << " trades (" << path.stream.size() << " events) to " << csv.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// verify-mrr

struct VerifyOpts {
    double rho = 0.5;
    double theta = 1.0;
    std::size_t depth = 200;
    double tol = 1e-9;
    std::optional<double> max_tail;
    std::string out;
};

int cmd_verify(const VerifyOpts& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const mrr::MrrParams params{o.rho, o.theta, 0.0, 0.0, 0};
    try {
        params.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (o.depth < 1) throw UsageError("--depth must be >= 1");
    const double max_tail = o.max_tail.value_or(0.1 * o.theta);

    std::ostringstream report;
    bool all_pass = true;
    Manifest m = start_manifest("verify-mrr", args);
    for (Side side : {Side::Ask, Side::Bid})
        for (mrr::Sign e : {mrr::Sign::Buy, mrr::Sign::Sell}) {
            mrr::OracleResult r;
            try {
                r = mrr::oracle_next_trade_expectation(params, side, e, o.depth, max_tail);
            } catch (const Error& ex) {
                err << ex.what() << "\n";
                return kDataError;
            }
            const bool pass = std::abs(r.value) <= r.tail_bound + o.tol;
            all_pass = all_pass && pass;
            const std::string key = std::string(side_name(side)) + (e == mrr::Sign::Buy ? ".up" : ".down");
            report << "next " << side_name(side) << " eps_prev=" << (e == mrr::Sign::Buy ? "+1" : "-1")
                   << " E[next - p]=" << num(r.value) << " tail_bound=" << num(r.tail_bound) << " "
                   << (pass ? "PASS" : "FAIL") << "\n";
            m.add("result." + key + ".value", num(r.value));
            m.add("result." + key + ".tail_bound", num(r.tail_bound));
        }
    report << "verify-mrr: " << (all_pass ? "PASS" : "FAIL") << "\n";
    out << report.str();
    m.add("result.summary", all_pass ? "PASS" : "FAIL");
    if (!o.out.empty()) {
        write_text(o.out, report.str());
        m.add("output", o.out);
        write_text(sidecar(o.out, ".manifest"), m.str());
    }
    return all_pass ? kOk : kDataError;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fair-price statistics and MRR simulation for tick data", "fairprice"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate an MRR fair market and write it as event CSV");
    simulate->add_option("--rho", sim.rho, "Sign autocorrelation, 0 < rho < 1");
    simulate->add_option("--theta", sim.theta, "Impact per unit surprise");
    simulate->add_option("--noise-std", sim.noise_std, "Std of exogenous fair-price noise");
    simulate->add_option("--p0", sim.p0, "Initial fair price");
    simulate->add_option("--n", sim.n, "Number of market orders");
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--interval-s", sim.interval_s, "Seconds between orders");
    simulate->add_option("--tick", sim.tick, "Reporting tick (default theta/2)");
    simulate->add_option("--price-step", sim.price_step, "Price grid (default tick/100)");
    simulate->add_option("--asset", sim.asset, "Asset id");
    simulate->add_option("-o,--out", sim.out, "Output CSV")->required();

    FairtestOpts ft;
    auto* fairtest = app.add_subcommand("fairtest", "Delta, Delta A and Delta B tables under E0..E4");
    fairtest->add_option("inputs", ft.inputs, "Event CSV files")->required();
    fairtest->add_option("--config", ft.config, "Asset config (default: <input>.config when present)");
    fairtest->add_option("--grid-dt", ft.grid_dt, "Grid spacing in seconds");
    fairtest->add_option("--out", ft.out, "Output table CSV");

    ResponseOpts rp;
    auto* response = app.add_subcommand("response", "Response-function variations per side");
    response->add_option("inputs", rp.inputs, "Event CSV files")->required();
    response->add_option("--config", rp.config, "Asset config (default: <input>.config when present)");
    response->add_option("--deltas", rp.deltas, "Comma-separated lags in seconds (default: 30 log-spaced, 0.01..600)");
    response->add_option("--out", rp.out, "Output prefix; writes <out>_ask.csv and <out>_bid.csv");

    VerifyOpts vf;
    auto* verify = app.add_subcommand("verify-mrr", "Check E[next ask] = E[next bid] = p in MRR by exact DP");
    verify->add_option("--rho", vf.rho, "Sign autocorrelation, 0 < rho < 1");
    verify->add_option("--theta", vf.theta, "Impact per unit surprise");
    verify->add_option("--depth", vf.depth, "Number of orders enumerated");
    verify->add_option("--tol", vf.tol, "Numerical tolerance added to the tail bound");
    verify->add_option("--max-tail", vf.max_tail, "Largest acceptable tail bound (default 0.1 theta)");
    verify->add_option("--out", vf.out, "Report file (also writes <out>.manifest)");

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest_path, "Manifest file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, args, out);
        if (fairtest->parsed()) return cmd_fairtest(ft, args, out, err);
        if (response->parsed()) return cmd_response(rp, args, out, err);
        if (verify->parsed()) return cmd_verify(vf, args, out, err);
        if (replay->parsed()) {
            std::ifstream in(manifest_path, std::ios::binary);
            if (!in) throw DataError("cannot open " + manifest_path);
            std::stringstream ss;
            ss << in.rdbuf();
            const auto argv = Manifest::parse(ss.str()).values("argv");
            if (argv.empty() || argv.front() == "replay") throw DataError("manifest has no replayable command");
            return run(argv, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}

} // namespace fairprice::cli
