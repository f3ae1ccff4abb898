#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "fairprice/market_event.hpp"

namespace fairprice {

/// Cumulative resting volume per side. For the ask side the value at price x
/// is the total volume offered at prices <= x; for the bid side, the volume
/// bid at prices >= x. Levels are stored individually and cumulated on read.
class CumulativeLiquidity {
public:
    using AskLevels = std::map<Price, std::int64_t>;
    using BidLevels = std::map<Price, std::int64_t, std::greater<Price>>;

    CumulativeLiquidity() = default;

    /// Builds from cumulative maps (price -> cumulative volume). Throws
    /// InvalidArgument if a map decreases away from the touch.
    static CumulativeLiquidity from_cumulative(const std::map<Price, std::int64_t>& ask,
                                               const std::map<Price, std::int64_t>& bid);

    std::optional<Price> best_ask() const;
    std::optional<Price> best_bid() const;

    /// Cumulative volume at `price` on `side` (step function, 0 before the touch).
    std::int64_t cumulative(Side side, Price price) const;

    std::map<Price, std::int64_t> cumulative_ask() const;
    std::map<Price, std::int64_t> cumulative_bid() const;

    std::int64_t total(Side side) const;

    const AskLevels& ask_levels() const noexcept { return ask_; }
    const BidLevels& bid_levels() const noexcept { return bid_; }

    bool operator==(const CumulativeLiquidity&) const = default;

private:
    friend CumulativeLiquidity apply_event(CumulativeLiquidity book, const MarketEvent& ev);

    AskLevels ask_;
    BidLevels bid_;
};

/// Trade: consumes `volume` from the touch outward on the side it hits (an Ask
/// trade consumes ask liquidity). BookUpdate: moves the touch to the event's
/// best quotes, dropping levels that are now inside the spread and opening a
/// level at a new touch (size `volume`, or 1 when the feed carries none).
/// Throws TradeExceedsLiquidity or CrossedBook.
CumulativeLiquidity apply_event(CumulativeLiquidity book, const MarketEvent& ev);

} // namespace fairprice
