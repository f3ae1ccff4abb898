#include "fairprice/event_stream.hpp"

#include <algorithm>

#include "fairprice/error.hpp"

namespace fairprice {

double mid_price(const MarketEvent& ev, const PriceScale& scale) noexcept {
    return 0.5 * scale.to_currency(mid_twice(ev));
}

NextTradeIndex next_trade_prices(std::span<const MarketEvent> events) {
    const std::size_t n = events.size();
    NextTradeIndex idx;
    idx.ask.assign(n + 1, kNoTrade);
    idx.bid.assign(n + 1, kNoTrade);
    idx.ask_strict.assign(n, kNoTrade);
    idx.bid_strict.assign(n, kNoTrade);

    std::size_t next_ask = kNoTrade;
    std::size_t next_bid = kNoTrade;
    for (std::size_t i = n; i-- > 0;) {
        idx.ask_strict[i] = next_ask;
        idx.bid_strict[i] = next_bid;
        if (events[i].is_trade(Side::Ask)) next_ask = i;
        if (events[i].is_trade(Side::Bid)) next_bid = i;
        idx.ask[i] = next_ask;
        idx.bid[i] = next_bid;
    }
    return idx;
}

EventStream::EventStream(std::string asset_id, PriceScale scale, std::int64_t tick_steps,
                         std::vector<MarketEvent> events, std::optional<TimeWindow> session)
    : asset_id_(std::move(asset_id)), scale_(scale), tick_steps_(tick_steps), events_(std::move(events)) {
    if (tick_steps_ <= 0) throw Error(Errc::InvalidArgument, "tick must be a positive number of price steps");
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const auto& ev = events_[i];
        if (i > 0 && !(events_[i - 1].order_key() < ev.order_key()))
            throw Error(Errc::OrderingError, "event " + std::to_string(i) + " is not after its predecessor in (ts, seq)");
        if (ev.best_ask <= ev.best_bid)
            throw Error(Errc::CrossedQuote, "event " + std::to_string(i) + " has best_ask <= best_bid");
        if (ev.is_trade() && ev.volume <= 0)
            throw Error(Errc::InvalidArgument, "trade " + std::to_string(i) + " has non-positive volume");
    }
    if (session) {
        session_ = *session;
    } else if (!events_.empty()) {
        session_ = TimeWindow{events_.front().ts_ns, events_.back().ts_ns + 1};
    }
    next_ = next_trade_prices(events_);
}

std::optional<Price> EventStream::next_price(Side side, std::size_t cut) const {
    const std::size_t j = next_trade(side, cut);
    if (j == kNoTrade) return std::nullopt;
    return events_[j].price;
}

std::optional<Price> EventStream::next_price_strict(Side side, std::size_t i) const {
    const std::size_t j = next_trade_strict(side, i);
    if (j == kNoTrade) return std::nullopt;
    return events_[j].price;
}

std::size_t EventStream::cut_at(std::int64_t ts) const {
    auto it = std::lower_bound(events_.begin(), events_.end(), ts,
                               [](const MarketEvent& ev, std::int64_t t) { return ev.ts_ns < t; });
    return static_cast<std::size_t>(it - events_.begin());
}

bool EventStream::operator==(const EventStream& other) const {
    return asset_id_ == other.asset_id_ && scale_ == other.scale_ && tick_steps_ == other.tick_steps_ &&
           session_ == other.session_ && events_ == other.events_;
}

std::vector<std::size_t> off_quote_trades(const EventStream& stream) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < stream.size(); ++i) {
        const auto& ev = stream[i];
        if (!ev.is_trade()) continue;
        const auto& prev = stream[i - 1];
        const Price quoted = ev.side == Side::Ask ? prev.best_ask : prev.best_bid;
        if (ev.price != quoted) out.push_back(i);
    }
    return out;
}

namespace {

EventStream rebuild(const EventStream& stream, std::vector<MarketEvent> events) {
    return EventStream(stream.asset_id(), stream.scale(), stream.tick_steps(), std::move(events),
                       stream.session());
}

} // namespace

EventStream with_shifted_trades(const EventStream& stream, Side side, std::int64_t delta_steps) {
    std::vector<MarketEvent> events(stream.events().begin(), stream.events().end());
    for (auto& ev : events)
        if (ev.is_trade(side)) ev.price = ev.price + delta_steps;
    return rebuild(stream, std::move(events));
}

EventStream with_translated_prices(const EventStream& stream, std::int64_t delta_steps) {
    std::vector<MarketEvent> events(stream.events().begin(), stream.events().end());
    for (auto& ev : events) {
        if (ev.is_trade()) ev.price = ev.price + delta_steps;
        ev.best_bid = ev.best_bid + delta_steps;
        ev.best_ask = ev.best_ask + delta_steps;
    }
    return rebuild(stream, std::move(events));
}

} // namespace fairprice
