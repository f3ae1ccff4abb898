#pragma once

#include <cstdint>
#include <tuple>

#include "fairprice/price.hpp"

namespace fairprice {

/// Ask: buy market order lifting the ask. Bid: sell market order hitting the bid.
enum class Side : std::uint8_t { Ask, Bid };

enum class EventKind : std::uint8_t { Trade, BookUpdate };

constexpr Side opposite(Side s) noexcept { return s == Side::Ask ? Side::Bid : Side::Ask; }

constexpr const char* side_name(Side s) noexcept { return s == Side::Ask ? "ask" : "bid"; }

/// One order-book event. best_bid/best_ask describe the book immediately
/// after the event has been applied. side/price/volume are meaningful for
/// trades only.
struct MarketEvent {
    std::int64_t ts_ns = 0;
    std::int64_t seq = 0;
    EventKind kind = EventKind::BookUpdate;
    Side side = Side::Ask;
    Price price{};
    std::int64_t volume = 0;
    Price best_bid{};
    Price best_ask{};

    bool is_trade() const noexcept { return kind == EventKind::Trade; }
    bool is_trade(Side s) const noexcept { return kind == EventKind::Trade && side == s; }

    auto order_key() const noexcept { return std::make_tuple(ts_ns, seq); }

    bool operator==(const MarketEvent&) const = default;
};

/// (best_bid + best_ask) / 2 in currency.
double mid_price(const MarketEvent& ev, const PriceScale& scale) noexcept;

/// best_bid + best_ask in steps; exact, so mid moves compare without rounding.
constexpr std::int64_t mid_twice(const MarketEvent& ev) noexcept {
    return ev.best_bid.steps + ev.best_ask.steps;
}

} // namespace fairprice
