#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairprice/market_event.hpp"
#include "fairprice/price.hpp"

namespace fairprice {

inline constexpr std::size_t kNoTrade = std::numeric_limits<std::size_t>::max();

/// Half-open time interval [start_ns, end_ns).
struct TimeWindow {
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;

    bool contains(std::int64_t ts) const noexcept { return ts >= start_ns && ts < end_ns; }
    std::int64_t length() const noexcept { return end_ns > start_ns ? end_ns - start_ns : 0; }
    bool operator==(const TimeWindow&) const = default;
};

/// Per-event indices of the next ask/bid trade. The inclusive arrays have
/// one extra trailing entry (index n) so that a cut past the last event
/// resolves to kNoTrade.
struct NextTradeIndex {
    std::vector<std::size_t> ask;
    std::vector<std::size_t> bid;
    std::vector<std::size_t> ask_strict;
    std::vector<std::size_t> bid_strict;

    const std::vector<std::size_t>& inclusive(Side s) const { return s == Side::Ask ? ask : bid; }
    const std::vector<std::size_t>& strict(Side s) const {
        return s == Side::Ask ? ask_strict : bid_strict;
    }
};

/// Single backward pass over time-ordered events.
NextTradeIndex next_trade_prices(std::span<const MarketEvent> events);

/// Immutable, validated event sequence of one asset-session with next-trade
/// lookups precomputed.
class EventStream {
public:
    EventStream() = default;

    /// Throws OrderingError on unsorted or duplicate (ts, seq), CrossedQuote
    /// when best_ask <= best_bid, InvalidArgument for non-positive trade volume.
    /// `session` defaults to [first ts, last ts + 1).
    EventStream(std::string asset_id, PriceScale scale, std::int64_t tick_steps,
                std::vector<MarketEvent> events, std::optional<TimeWindow> session = std::nullopt);

    const std::string& asset_id() const noexcept { return asset_id_; }
    const PriceScale& scale() const noexcept { return scale_; }
    std::int64_t tick_steps() const noexcept { return tick_steps_; }
    double tick() const noexcept { return scale_.to_currency(tick_steps_); }
    const TimeWindow& session() const noexcept { return session_; }

    std::span<const MarketEvent> events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const MarketEvent& operator[](std::size_t i) const { return events_[i]; }

    const NextTradeIndex& next_index() const noexcept { return next_; }

    /// First `side` trade at or after position `cut` (cut may equal size()).
    std::size_t next_trade(Side side, std::size_t cut) const { return next_.inclusive(side)[cut]; }
    /// First `side` trade strictly after event `i`.
    std::size_t next_trade_strict(Side side, std::size_t i) const { return next_.strict(side)[i]; }

    std::optional<Price> next_price(Side side, std::size_t cut) const;
    std::optional<Price> next_price_strict(Side side, std::size_t i) const;

    /// Index of the first event with ts_ns >= ts. Events before it form the
    /// strict past of time ts.
    std::size_t cut_at(std::int64_t ts) const;

    bool operator==(const EventStream& other) const;

private:
    std::string asset_id_;
    PriceScale scale_;
    std::int64_t tick_steps_ = 1;
    TimeWindow session_;
    std::vector<MarketEvent> events_;
    NextTradeIndex next_;
};

/// Indices of trades that did not execute at the quote prevailing just
/// before them (Ask at the previous best_ask, Bid at the previous best_bid).
/// A trade with no preceding event is not checked.
std::vector<std::size_t> off_quote_trades(const EventStream& stream);

/// Copy of `stream` with every `side` trade price moved by `delta_steps`.
/// Quotes are left untouched.
EventStream with_shifted_trades(const EventStream& stream, Side side, std::int64_t delta_steps);

/// Copy with every price (trades and quotes) moved by `delta_steps`.
EventStream with_translated_prices(const EventStream& stream, std::int64_t delta_steps);

} // namespace fairprice
