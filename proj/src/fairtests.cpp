#include "fairprice/fairtests.hpp"

#include <cmath>

#include "fairprice/error.hpp"

namespace fairprice {

namespace {

/// Walks a sorted list of times and yields the cut (number of strictly
/// earlier events) for each.
class CutCursor {
public:
    explicit CutCursor(const EventStream& stream) : events_(stream.events()) {}

    std::size_t advance_to(std::int64_t ts) {
        while (pos_ < events_.size() && events_[pos_].ts_ns < ts) ++pos_;
        return pos_;
    }

private:
    std::span<const MarketEvent> events_;
    std::size_t pos_ = 0;
};

} // namespace

Accumulator accumulate_delta_i(const EventStream& stream, const GridSpec& grid, const ConditioningEvent& cond) {
    const auto points = build_grid(stream, grid);
    const PastStateIndex past(stream);
    CutCursor cursor(stream);
    Accumulator acc;
    for (std::int64_t t : points) {
        const std::size_t cut = cursor.advance_to(t);
        const std::size_t na = stream.next_trade(Side::Ask, cut);
        const std::size_t nb = stream.next_trade(Side::Bid, cut);
        if (na == kNoTrade || nb == kNoTrade) continue;
        if (!past.holds(cond, cut)) continue;
        acc.add(stream[na].price - stream[nb].price);
    }
    return acc;
}

StatResult delta_i(const EventStream& stream, const GridSpec& grid, const ConditioningEvent& cond) {
    return summarize(accumulate_delta_i(stream, grid, cond), stream.scale(), stream.tick());
}

Accumulator accumulate_delta_side(const EventStream& stream, Side side, const ConditioningEvent& cond,
                                  const TimeWindow& window) {
    const PastStateIndex past(stream);
    Accumulator acc;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const auto& ev = stream[i];
        if (!ev.is_trade(side) || !window.contains(ev.ts_ns)) continue;
        const std::size_t next = stream.next_trade_strict(side, i);
        if (next == kNoTrade) continue;
        if (!past.holds(cond, i)) continue;
        acc.add(ev.price - stream[next].price);
    }
    return acc;
}

StatResult delta_side(const EventStream& stream, Side side, const ConditioningEvent& cond, const TimeWindow& window) {
    return summarize(accumulate_delta_side(stream, side, cond, window), stream.scale(), stream.tick());
}

StatResult delta_A(const EventStream& stream, const ConditioningEvent& cond) {
    return delta_side(stream, Side::Ask, cond, stream.session());
}

StatResult delta_A(const EventStream& stream, const ConditioningEvent& cond, const TimeWindow& window) {
    return delta_side(stream, Side::Ask, cond, window);
}

StatResult delta_B(const EventStream& stream, const ConditioningEvent& cond) {
    return delta_side(stream, Side::Bid, cond, stream.session());
}

StatResult delta_B(const EventStream& stream, const ConditioningEvent& cond, const TimeWindow& window) {
    return delta_side(stream, Side::Bid, cond, window);
}

void ResponseAccumulator::merge(const ResponseAccumulator& other) {
    if (side != other.side || deltas_ns != other.deltas_ns)
        throw Error(Errc::InvalidArgument, "response accumulators differ in side or lag grid");
    for (std::size_t d = 0; d < per_delta.size(); ++d) per_delta[d].merge(other.per_delta[d]);
    trades += other.trades;
}

ResponseAccumulator accumulate_response(const EventStream& stream, Side side,
                                        const std::vector<std::int64_t>& deltas_ns, const TimeWindow& window) {
    for (std::size_t d = 0; d < deltas_ns.size(); ++d) {
        if (deltas_ns[d] <= 0) throw Error(Errc::InvalidArgument, "response lags must be positive");
        if (d > 0 && deltas_ns[d] <= deltas_ns[d - 1])
            throw Error(Errc::InvalidArgument, "response lags must be strictly ascending");
    }

    ResponseAccumulator acc;
    acc.side = side;
    acc.deltas_ns = deltas_ns;
    acc.per_delta.resize(deltas_ns.size());
    std::vector<CutCursor> cursors(deltas_ns.size(), CutCursor(stream));

    for (std::size_t i = 0; i < stream.size(); ++i) {
        const auto& ev = stream[i];
        if (!ev.is_trade(side) || !window.contains(ev.ts_ns)) continue;
        ++acc.trades;
        const std::size_t base = stream.next_trade_strict(side, i);
        if (base == kNoTrade) continue;
        for (std::size_t d = 0; d < deltas_ns.size(); ++d) {
            const std::size_t cut = cursors[d].advance_to(ev.ts_ns + deltas_ns[d]);
            const std::size_t later = stream.next_trade(side, cut);
            if (later == kNoTrade) continue;
            acc.per_delta[d].add(stream[later].price - stream[base].price);
        }
    }
    return acc;
}

ResponseCurve summarize_response(const ResponseAccumulator& acc, const PriceScale& scale) {
    ResponseCurve curve;
    curve.side = acc.side;
    curve.trades = acc.trades;
    for (std::size_t d = 0; d < acc.deltas_ns.size(); ++d) {
        const Accumulator& a = acc.per_delta[d];
        if (a.count() == 0) continue;
        const StatResult r = summarize(a, scale, 1.0);
        curve.points.push_back(ResponsePoint{static_cast<double>(acc.deltas_ns[d]) / kNanosPerSecond, r.estimate,
                                             r.count, r.std_error});
    }
    return curve;
}

ResponseCurve response_curve(const EventStream& stream, Side side, const std::vector<double>& deltas_s) {
    return response_curve(stream, side, deltas_s, stream.session());
}

ResponseCurve response_curve(const EventStream& stream, Side side, const std::vector<double>& deltas_s,
                             const TimeWindow& window) {
    const ResponseAccumulator acc = accumulate_response(stream, side, deltas_to_ns(deltas_s), window);
    if (acc.trades == 0)
        throw Error(Errc::EmptyConditioning, std::string("no ") + side_name(side) + " trades in the window");
    return summarize_response(acc, stream.scale());
}

std::vector<double> default_response_deltas() {
    constexpr int kPoints = 30;
    const double lo = std::log(0.01);
    const double hi = std::log(600.0);
    std::vector<double> out;
    out.reserve(kPoints);
    for (int k = 0; k < kPoints; ++k) out.push_back(std::exp(lo + (hi - lo) * k / (kPoints - 1)));
    return out;
}

std::vector<std::int64_t> deltas_to_ns(const std::vector<double>& deltas_s) {
    std::vector<std::int64_t> out;
    out.reserve(deltas_s.size());
    for (double d : deltas_s) out.push_back(std::llround(d * kNanosPerSecond));
    return out;
}

Accumulator accumulate_spread(const EventStream& stream, const GridSpec& grid) {
    CutCursor cursor(stream);
    Accumulator acc;
    for (std::int64_t t : build_grid(stream, grid)) {
        const std::size_t cut = cursor.advance_to(t);
        if (cut == 0) continue;
        const auto& ev = stream[cut - 1];
        acc.add(ev.best_ask - ev.best_bid);
    }
    return acc;
}

std::optional<double> mean_spread(const EventStream& stream, const GridSpec& grid) {
    const Accumulator acc = accumulate_spread(stream, grid);
    if (acc.count() == 0) return std::nullopt;
    return acc.mean_steps() * stream.scale().step();
}

} // namespace fairprice
