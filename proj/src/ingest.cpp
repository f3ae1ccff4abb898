#include "fairprice/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fairprice/error.hpp"

namespace fairprice {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::int64_t to_nanos(double value) { return std::llround(value * kNanosPerUnit); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

std::int64_t parse_int(std::string_view field, const char* what, std::size_t row) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw Error(Errc::ParseError, std::string("bad ") + what + " '" + std::string(field) + "'", row);
    return v;
}

Price parse_price(const PriceScale& scale, std::string_view field, const char* what, std::size_t row) {
    try {
        return scale.parse(field);
    } catch (const Error& e) {
        throw Error(e.code(), std::string(what) + ": " + e.what(), row);
    }
}

std::int64_t seconds_to_ns(std::string_view value, const std::string& key) {
    std::int64_t nanos = 0;
    if (!parse_decimal_nanos(value, nanos))
        throw Error(Errc::ParseError, "bad value for " + key + ": '" + std::string(value) + "'");
    return nanos;
}

double parse_currency(std::string_view value, const std::string& key) {
    std::int64_t nanos = 0;
    if (!parse_decimal_nanos(value, nanos))
        throw Error(Errc::ParseError, "bad value for " + key + ": '" + std::string(value) + "'");
    return static_cast<double>(nanos) / kNanosPerUnit;
}

} // namespace

void AssetConfig::validate() const {
    if (!(tick > 0.0)) throw Error(Errc::InvalidArgument, "tick must be positive");
    if (!(price_step > 0.0)) throw Error(Errc::InvalidArgument, "price_step must be positive");
    const std::int64_t tick_n = to_nanos(tick);
    const std::int64_t step_n = to_nanos(price_step);
    if (step_n <= 0 || tick_n % step_n != 0) throw Error(Errc::InvalidArgument, "price_step must divide tick");
    if (grid.trim_head_ns < 0 || grid.trim_tail_ns < 0) throw Error(Errc::InvalidArgument, "trims must be >= 0");
    if (grid.dt_ns <= 0) throw Error(Errc::InvalidArgument, "grid_dt_s must be positive");
    if (session_start_ns && session_end_ns && *session_end_ns <= *session_start_ns)
        throw Error(Errc::InvalidArgument, "session end must be after session start");
}

std::int64_t AssetConfig::tick_steps() const {
    return to_nanos(tick) / to_nanos(price_step);
}

AssetConfig parse_asset_config(const std::string& text) {
    AssetConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::ParseError, "config line " + std::to_string(lineno) + " has no '='");
        const std::string key(trim(sv.substr(0, eq)));
        const std::string_view value = trim(sv.substr(eq + 1));
        if (key == "asset_id") cfg.asset_id = std::string(value);
        else if (key == "tick") cfg.tick = parse_currency(value, key);
        else if (key == "price_step") cfg.price_step = parse_currency(value, key);
        else if (key == "trim_head_s") cfg.grid.trim_head_ns = seconds_to_ns(value, key);
        else if (key == "trim_tail_s") cfg.grid.trim_tail_ns = seconds_to_ns(value, key);
        else if (key == "grid_dt_s") cfg.grid.dt_ns = seconds_to_ns(value, key);
        else if (key == "session_start_s") cfg.session_start_ns = seconds_to_ns(value, key);
        else if (key == "session_end_s") cfg.session_end_ns = seconds_to_ns(value, key);
        else throw Error(Errc::ParseError, "unknown config key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

AssetConfig load_asset_config(const std::filesystem::path& path) {
    AssetConfig cfg = parse_asset_config(read_file(path));
    if (cfg.asset_id.empty()) cfg.asset_id = path.stem().string();
    return cfg;
}

std::string format_asset_config(const AssetConfig& c) {
    std::ostringstream out;
    if (!c.asset_id.empty()) out << "asset_id=" << c.asset_id << '\n';
    out << "tick=" << format_decimal_nanos(to_nanos(c.tick)) << '\n';
    out << "price_step=" << format_decimal_nanos(to_nanos(c.price_step)) << '\n';
    out << "trim_head_s=" << format_decimal_nanos(c.grid.trim_head_ns) << '\n';
    out << "trim_tail_s=" << format_decimal_nanos(c.grid.trim_tail_ns) << '\n';
    out << "grid_dt_s=" << format_decimal_nanos(c.grid.dt_ns) << '\n';
    if (c.session_start_ns) out << "session_start_s=" << format_decimal_nanos(*c.session_start_ns) << '\n';
    if (c.session_end_ns) out << "session_end_s=" << format_decimal_nanos(*c.session_end_ns) << '\n';
    return out.str();
}

void save_asset_config(const std::filesystem::path& path, const AssetConfig& config) {
    write_file(path, format_asset_config(config));
}

EventStream parse_session(const std::string& csv_text, const AssetConfig& config) {
    config.validate();
    const PriceScale scale = config.scale();
    std::vector<MarketEvent> events;

    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= csv_text.size()) return false;
        std::size_t end = csv_text.find('\n', pos);
        if (end == std::string::npos) end = csv_text.size();
        line = std::string_view(csv_text).substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        return true;
    };

    std::string_view line;
    if (!next_line(line) || trim(line) != kCsvHeader)
        throw Error(Errc::ParseError, std::string("missing or wrong header; expected '") + kCsvHeader + "'");

    std::size_t row = 0;
    std::array<std::string_view, 8> f;
    while (next_line(line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::size_t nf = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (nf == f.size()) throw Error(Errc::ParseError, "too many fields", row);
            f[nf++] = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (nf != f.size()) throw Error(Errc::ParseError, "expected 8 fields, got " + std::to_string(nf), row);

        MarketEvent ev;
        ev.ts_ns = parse_int(f[0], "ts_ns", row);
        ev.seq = parse_int(f[1], "seq", row);
        if (f[2] == "T") ev.kind = EventKind::Trade;
        else if (f[2] == "B") ev.kind = EventKind::BookUpdate;
        else throw Error(Errc::ParseError, "kind must be T or B", row);

        if (ev.kind == EventKind::Trade) {
            if (f[3] == "A") ev.side = Side::Ask;
            else if (f[3] == "B") ev.side = Side::Bid;
            else throw Error(Errc::ParseError, "trade side must be A or B", row);
            ev.price = parse_price(scale, f[4], "price", row);
            ev.volume = parse_int(f[5], "volume", row);
            if (ev.volume <= 0) throw Error(Errc::ParseError, "trade volume must be positive", row);
        } else {
            if (f[3] != "-" && !f[3].empty()) throw Error(Errc::ParseError, "book update side must be '-'", row);
            if (!f[4].empty()) throw Error(Errc::ParseError, "book update carries a price", row);
            if (!f[5].empty()) ev.volume = parse_int(f[5], "volume", row);
        }
        ev.best_bid = parse_price(scale, f[6], "best_bid", row);
        ev.best_ask = parse_price(scale, f[7], "best_ask", row);
        if (ev.best_ask <= ev.best_bid) throw Error(Errc::CrossedQuote, "best_ask <= best_bid", row);

        if (config.session_start_ns && ev.ts_ns < *config.session_start_ns) continue;
        if (config.session_end_ns && ev.ts_ns >= *config.session_end_ns) continue;
        if (!events.empty() && !(events.back().order_key() < ev.order_key()))
            throw Error(Errc::OrderingError, "(ts_ns, seq) does not increase", row);
        events.push_back(ev);
    }

    std::optional<TimeWindow> session;
    if (config.session_start_ns || config.session_end_ns) {
        TimeWindow w;
        w.start_ns = config.session_start_ns.value_or(events.empty() ? 0 : events.front().ts_ns);
        w.end_ns = config.session_end_ns.value_or(events.empty() ? w.start_ns : events.back().ts_ns + 1);
        session = w;
    }
    return EventStream(config.asset_id, scale, config.tick_steps(), std::move(events), session);
}

EventStream load_session(const std::filesystem::path& path, const AssetConfig& config) {
    AssetConfig cfg = config;
    if (cfg.asset_id.empty()) cfg.asset_id = path.stem().string();
    return parse_session(read_file(path), cfg);
}

std::string format_session(const EventStream& stream) {
    const PriceScale& scale = stream.scale();
    std::string out = kCsvHeader;
    out += '\n';
    out.reserve(stream.size() * 48);
    for (const auto& ev : stream.events()) {
        out += std::to_string(ev.ts_ns);
        out += ',';
        out += std::to_string(ev.seq);
        if (ev.is_trade()) {
            out += ev.side == Side::Ask ? ",T,A," : ",T,B,";
            out += scale.format(ev.price);
            out += ',';
            out += std::to_string(ev.volume);
        } else {
            out += ",B,-,,";
            if (ev.volume > 0) out += std::to_string(ev.volume);
        }
        out += ',';
        out += scale.format(ev.best_bid);
        out += ',';
        out += scale.format(ev.best_ask);
        out += '\n';
    }
    return out;
}

void save_session(const std::filesystem::path& path, const EventStream& stream) {
    write_file(path, format_session(stream));
}

AssetConfig config_for(const EventStream& stream, const GridSpec& grid) {
    AssetConfig cfg;
    cfg.asset_id = stream.asset_id();
    cfg.price_step = stream.scale().step();
    cfg.tick = stream.tick();
    cfg.session_start_ns = stream.session().start_ns;
    cfg.session_end_ns = stream.session().end_ns;
    cfg.grid = grid;
    return cfg;
}

} // namespace fairprice
