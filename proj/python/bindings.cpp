#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fairprice/error.hpp"
#include "fairprice/fairtests.hpp"
#include "fairprice/ingest.hpp"
#include "fairprice/mrr.hpp"

namespace py = pybind11;
using namespace fairprice;

namespace {

Side parse_side(const std::string& s) {
    if (s == "ask") return Side::Ask;
    if (s == "bid") return Side::Bid;
    throw py::value_error("side must be 'ask' or 'bid'");
}

ConditioningEvent parse_condition(const std::string& name) {
    for (const auto& c : ConditioningEvent::standard())
        if (c.name() == name) return c;
    throw py::value_error("condition must be one of E0..E4");
}

py::dict stat_dict(const Accumulator& acc, const EventStream& s) {
    py::dict d;
    d["count"] = acc.count();
    if (acc.count() == 0) {
        d["estimate"] = py::none();
        d["stderr"] = py::none();
        d["ticks"] = py::none();
        return d;
    }
    const StatResult r = summarize(acc, s.scale(), s.tick());
    d["estimate"] = r.estimate;
    d["stderr"] = r.std_error ? py::cast(*r.std_error) : py::none();
    d["ticks"] = r.estimate_in_ticks;
    return d;
}

py::dict event_dict(const MarketEvent& ev, const PriceScale& scale) {
    py::dict d;
    d["ts_ns"] = ev.ts_ns;
    d["seq"] = ev.seq;
    d["kind"] = ev.is_trade() ? "trade" : "book";
    d["side"] = ev.is_trade() ? py::cast(std::string(side_name(ev.side))) : py::none();
    d["price"] = ev.is_trade() ? py::cast(scale.to_currency(ev.price.steps)) : py::none();
    d["volume"] = ev.volume;
    d["best_bid"] = scale.to_currency(ev.best_bid.steps);
    d["best_ask"] = scale.to_currency(ev.best_ask.steps);
    return d;
}

AssetConfig make_config(const std::optional<std::string>& config_path, const std::optional<double>& tick,
                        const std::optional<double>& price_step) {
    AssetConfig c = config_path ? load_asset_config(*config_path) : AssetConfig{};
    if (tick) c.tick = *tick;
    if (price_step) c.price_step = *price_step;
    return c;
}

} // namespace

PYBIND11_MODULE(_fairprice, m) {
    m.doc() = "Fair-price statistics for tick data and an MRR market simulator";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            error(e.what());
        }
    });

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double dt_s, double trim_head_s, double trim_tail_s) {
                 return GridSpec{std::llround(dt_s * kNanosPerSecond), std::llround(trim_head_s * kNanosPerSecond),
                                 std::llround(trim_tail_s * kNanosPerSecond)};
             }),
             py::arg("dt_s") = 10.0, py::arg("trim_head_s") = 3600.0, py::arg("trim_tail_s") = 3600.0)
        .def_readwrite("dt_ns", &GridSpec::dt_ns)
        .def_readwrite("trim_head_ns", &GridSpec::trim_head_ns)
        .def_readwrite("trim_tail_ns", &GridSpec::trim_tail_ns);

    py::class_<EventStream>(m, "EventStream")
        .def_property_readonly("asset_id", &EventStream::asset_id)
        .def_property_readonly("tick", &EventStream::tick)
        .def_property_readonly("price_step", [](const EventStream& s) { return s.scale().step(); })
        .def_property_readonly("session_ns",
                               [](const EventStream& s) { return py::make_tuple(s.session().start_ns, s.session().end_ns); })
        .def("__len__", &EventStream::size)
        .def("__getitem__",
             [](const EventStream& s, std::int64_t i) {
                 const auto n = static_cast<std::int64_t>(s.size());
                 if (i < 0) i += n;
                 if (i < 0 || i >= n) throw py::index_error();
                 return event_dict(s[static_cast<std::size_t>(i)], s.scale());
             })
        .def("__eq__", [](const EventStream& a, const EventStream& b) { return a == b; })
        .def(
            "next_price",
            [](const EventStream& s, const std::string& side, std::size_t cut, bool strict) -> std::optional<double> {
                if (cut > s.size() || (strict && cut >= s.size())) throw py::index_error();
                const auto p = strict ? s.next_price_strict(parse_side(side), cut) : s.next_price(parse_side(side), cut);
                if (!p) return std::nullopt;
                return s.scale().to_currency(p->steps);
            },
            py::arg("side"), py::arg("cut"), py::arg("strict") = false,
            "Next trade price on `side` at or after event `cut` (strictly after when strict).")
        .def(
            "shifted",
            [](const EventStream& s, const std::string& side, std::int64_t ticks) {
                return with_shifted_trades(s, parse_side(side), ticks * s.tick_steps());
            },
            py::arg("side"), py::arg("ticks") = 1, "Copy with every `side` execution price moved by `ticks` ticks.");

    m.def(
        "simulate_mrr",
        [](double rho, double theta, std::size_t n, std::uint64_t seed, double noise_std, double p0, double interval_s,
           double tick, double price_step, const std::string& asset) {
            const mrr::MrrParams params{rho, theta, p0, noise_std, seed};
            const mrr::EmissionSpec spec{asset, std::llround(interval_s * kNanosPerSecond), tick, price_step};
            return mrr::simulate(params, n, spec).stream;
        },
        py::arg("rho") = 0.5, py::arg("theta") = 1.0, py::arg("n") = 1000, py::arg("seed") = 0,
        py::arg("noise_std") = 0.0, py::arg("p0") = 100.0, py::arg("interval_s") = 1.0, py::arg("tick") = 0.0,
        py::arg("price_step") = 0.0, py::arg("asset") = "MRR");

    m.def(
        "load_session",
        [](const std::filesystem::path& path, std::optional<std::string> config, std::optional<double> tick,
           std::optional<double> price_step) {
            AssetConfig c = make_config(config, tick, price_step);
            if (c.asset_id.empty()) c.asset_id = path.stem().string();
            return load_session(path, c);
        },
        py::arg("path"), py::arg("config") = py::none(), py::arg("tick") = py::none(),
        py::arg("price_step") = py::none());

    m.def(
        "save_session",
        [](const std::filesystem::path& path, const EventStream& s, bool write_config, double grid_dt_s) {
            save_session(path, s);
            if (write_config)
                save_asset_config(path.string() + ".config",
                                  config_for(s, GridSpec::untrimmed(std::llround(grid_dt_s * kNanosPerSecond))));
        },
        py::arg("path"), py::arg("stream"), py::arg("write_config") = true, py::arg("grid_dt_s") = 10.0);

    m.def(
        "delta",
        [](const EventStream& s, const std::string& condition, const GridSpec& grid) {
            return stat_dict(accumulate_delta_i(s, grid, parse_condition(condition)), s);
        },
        py::arg("stream"), py::arg("condition") = "E0", py::arg("grid") = GridSpec::untrimmed(10 * kNanosPerSecond),
        "Mean of next ask minus next bid over grid points where the condition holds.");

    m.def(
        "delta_side",
        [](const EventStream& s, const std::string& side, const std::string& condition, const GridSpec& grid) {
            return stat_dict(
                accumulate_delta_side(s, parse_side(side), parse_condition(condition), grid.trimmed(s.session())), s);
        },
        py::arg("stream"), py::arg("side"), py::arg("condition") = "E0",
        py::arg("grid") = GridSpec::untrimmed(10 * kNanosPerSecond),
        "Mean of trade price minus the next same-side trade price.");

    m.def(
        "response_curve",
        [](const EventStream& s, const std::string& side, std::optional<std::vector<double>> deltas_s) {
            const auto curve = response_curve(s, parse_side(side), deltas_s.value_or(default_response_deltas()));
            py::list out;
            for (const auto& p : curve.points) {
                py::dict d;
                d["delta_s"] = p.delta_s;
                d["value"] = p.value;
                d["count"] = p.count;
                d["stderr"] = p.std_error ? py::cast(*p.std_error) : py::none();
                out.append(d);
            }
            return out;
        },
        py::arg("stream"), py::arg("side"), py::arg("deltas_s") = py::none());

    m.def(
        "mean_spread",
        [](const EventStream& s, const GridSpec& grid) { return mean_spread(s, grid); }, py::arg("stream"),
        py::arg("grid") = GridSpec::untrimmed(10 * kNanosPerSecond));

    m.def(
        "verify_mrr",
        [](double rho, double theta, std::size_t depth, double tol, std::optional<double> max_tail) {
            const mrr::MrrParams params{rho, theta, 0.0, 0.0, 0};
            py::list rows;
            bool pass = true;
            for (Side side : {Side::Ask, Side::Bid})
                for (mrr::Sign e : {mrr::Sign::Buy, mrr::Sign::Sell}) {
                    const auto r =
                        mrr::oracle_next_trade_expectation(params, side, e, depth, max_tail.value_or(0.1 * theta));
                    const bool ok = std::abs(r.value) <= r.tail_bound + tol;
                    pass = pass && ok;
                    py::dict d;
                    d["side"] = side_name(side);
                    d["eps_prev"] = mrr::value(e);
                    d["value"] = r.value;
                    d["tail_bound"] = r.tail_bound;
                    d["pass"] = ok;
                    rows.append(d);
                }
            py::dict out;
            out["pass"] = pass;
            out["rows"] = rows;
            return out;
        },
        py::arg("rho"), py::arg("theta") = 1.0, py::arg("depth") = 200, py::arg("tol") = 1e-9,
        py::arg("max_tail") = py::none());
}
