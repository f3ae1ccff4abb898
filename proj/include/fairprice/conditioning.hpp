#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fairprice/event_stream.hpp"

namespace fairprice {

enum class Condition : std::uint8_t {
    All,            // E0
    LastTradeBuy,   // E1: last market order before t was a buy (Ask trade)
    LastTradeSell,  // E2: last market order before t was a sell (Bid trade)
    LastMidUp,      // E3: last mid-price change before t was upward
    LastMidDown,    // E4: last mid-price change before t was downward
    Custom,
};

/// Predicate on the strict past of an evaluation point. A point with no
/// qualifying past event (no trade yet, no mid change yet) does not satisfy
/// E1..E4.
class ConditioningEvent {
public:
    using Predicate = std::function<bool(std::span<const MarketEvent> past)>;

    ConditioningEvent(Condition kind = Condition::All);  // NOLINT: implicit by intent

    static ConditioningEvent custom(std::string name, Predicate predicate);

    /// E0..E4 in order.
    static const std::array<ConditioningEvent, 5>& standard();

    Condition kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    /// Reference evaluation: scans the past backwards.
    bool evaluate(const EventStream& stream, std::size_t cut) const;

private:
    Condition kind_;
    std::string name_;
    Predicate predicate_;
};

/// `cut` is the number of past events: events [0, cut) form the strict past.
bool evaluate_conditioning(const EventStream& stream, std::size_t cut, const ConditioningEvent& cond);

/// Last trade side and last mid move direction before every cut, built in one
/// forward pass. Gives the same answers as evaluate_conditioning in O(1).
class PastStateIndex {
public:
    explicit PastStateIndex(const EventStream& stream);

    bool holds(const ConditioningEvent& cond, std::size_t cut) const;

private:
    const EventStream* stream_;
    // +1 / -1 / 0 (none) for cut = 0..n
    std::vector<std::int8_t> last_trade_;
    std::vector<std::int8_t> last_mid_move_;
};

} // namespace fairprice
