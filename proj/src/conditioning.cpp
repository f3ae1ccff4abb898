#include "fairprice/conditioning.hpp"

#include "fairprice/error.hpp"

namespace fairprice {

namespace {

const char* condition_name(Condition c) {
    switch (c) {
    case Condition::All: return "E0";
    case Condition::LastTradeBuy: return "E1";
    case Condition::LastTradeSell: return "E2";
    case Condition::LastMidUp: return "E3";
    case Condition::LastMidDown: return "E4";
    case Condition::Custom: return "custom";
    }
    return "?";
}

} // namespace

ConditioningEvent::ConditioningEvent(Condition kind) : kind_(kind), name_(condition_name(kind)) {
    if (kind == Condition::Custom)
        throw Error(Errc::InvalidArgument, "custom conditions need a predicate; use ConditioningEvent::custom");
}

ConditioningEvent ConditioningEvent::custom(std::string name, Predicate predicate) {
    if (!predicate) throw Error(Errc::InvalidArgument, "custom condition without predicate");
    ConditioningEvent ev(Condition::All);
    ev.kind_ = Condition::Custom;
    ev.name_ = std::move(name);
    ev.predicate_ = std::move(predicate);
    return ev;
}

const std::array<ConditioningEvent, 5>& ConditioningEvent::standard() {
    static const std::array<ConditioningEvent, 5> events{
        ConditioningEvent(Condition::All), ConditioningEvent(Condition::LastTradeBuy),
        ConditioningEvent(Condition::LastTradeSell), ConditioningEvent(Condition::LastMidUp),
        ConditioningEvent(Condition::LastMidDown)};
    return events;
}

bool ConditioningEvent::evaluate(const EventStream& stream, std::size_t cut) const {
    if (cut > stream.size()) throw Error(Errc::InvalidArgument, "evaluation point past the end of the stream");
    const auto past = stream.events().first(cut);
    switch (kind_) {
    case Condition::All:
        return true;
    case Condition::LastTradeBuy:
    case Condition::LastTradeSell:
        for (std::size_t i = past.size(); i-- > 0;) {
            if (past[i].is_trade())
                return past[i].side == (kind_ == Condition::LastTradeBuy ? Side::Ask : Side::Bid);
        }
        return false;
    case Condition::LastMidUp:
    case Condition::LastMidDown:
        for (std::size_t i = past.size(); i-- > 1;) {
            const std::int64_t move = mid_twice(past[i]) - mid_twice(past[i - 1]);
            if (move != 0) return (move > 0) == (kind_ == Condition::LastMidUp);
        }
        return false;
    case Condition::Custom:
        return predicate_(past);
    }
    return false;
}

bool evaluate_conditioning(const EventStream& stream, std::size_t cut, const ConditioningEvent& cond) {
    return cond.evaluate(stream, cut);
}

PastStateIndex::PastStateIndex(const EventStream& stream) : stream_(&stream) {
    const std::size_t n = stream.size();
    last_trade_.assign(n + 1, 0);
    last_mid_move_.assign(n + 1, 0);
    std::int8_t trade = 0;
    std::int8_t move = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ev = stream[i];
        if (ev.is_trade()) trade = ev.side == Side::Ask ? 1 : -1;
        if (i > 0) {
            const std::int64_t d = mid_twice(ev) - mid_twice(stream[i - 1]);
            if (d != 0) move = d > 0 ? 1 : -1;
        }
        last_trade_[i + 1] = trade;
        last_mid_move_[i + 1] = move;
    }
}

bool PastStateIndex::holds(const ConditioningEvent& cond, std::size_t cut) const {
    switch (cond.kind()) {
    case Condition::All: return true;
    case Condition::LastTradeBuy: return last_trade_[cut] == 1;
    case Condition::LastTradeSell: return last_trade_[cut] == -1;
    case Condition::LastMidUp: return last_mid_move_[cut] == 1;
    case Condition::LastMidDown: return last_mid_move_[cut] == -1;
    case Condition::Custom: return cond.evaluate(*stream_, cut);
    }
    return false;
}

} // namespace fairprice
