#include "fairprice/liquidity.hpp"

#include "fairprice/error.hpp"

namespace fairprice {

namespace {

template <typename Levels>
std::int64_t consume(Levels& levels, std::int64_t volume) {
    std::int64_t remaining = volume;
    while (remaining > 0 && !levels.empty()) {
        auto it = levels.begin();
        const std::int64_t take = std::min(remaining, it->second);
        it->second -= take;
        remaining -= take;
        if (it->second == 0) levels.erase(it);
    }
    return remaining;
}

template <typename Levels>
std::int64_t level_total(const Levels& levels) {
    std::int64_t sum = 0;
    for (const auto& [price, vol] : levels) sum += vol;
    return sum;
}

} // namespace

CumulativeLiquidity CumulativeLiquidity::from_cumulative(const std::map<Price, std::int64_t>& ask,
                                                         const std::map<Price, std::int64_t>& bid) {
    CumulativeLiquidity book;
    std::int64_t prev = 0;
    for (const auto& [price, cum] : ask) {
        if (cum < prev) throw Error(Errc::InvalidArgument, "ask cumulative liquidity must be nondecreasing in price");
        if (cum > prev) book.ask_[price] = cum - prev;
        prev = cum;
    }
    prev = 0;
    for (auto it = bid.rbegin(); it != bid.rend(); ++it) {
        if (it->second < prev)
            throw Error(Errc::InvalidArgument, "bid cumulative liquidity must be nondecreasing as price falls");
        if (it->second > prev) book.bid_[it->first] = it->second - prev;
        prev = it->second;
    }
    if (book.best_ask() && book.best_bid() && *book.best_ask() <= *book.best_bid())
        throw Error(Errc::CrossedBook, "best ask must be above best bid");
    return book;
}

std::optional<Price> CumulativeLiquidity::best_ask() const {
    if (ask_.empty()) return std::nullopt;
    return ask_.begin()->first;
}

std::optional<Price> CumulativeLiquidity::best_bid() const {
    if (bid_.empty()) return std::nullopt;
    return bid_.begin()->first;
}

std::int64_t CumulativeLiquidity::cumulative(Side side, Price price) const {
    std::int64_t sum = 0;
    if (side == Side::Ask) {
        for (const auto& [p, vol] : ask_) {
            if (p > price) break;
            sum += vol;
        }
    } else {
        for (const auto& [p, vol] : bid_) {
            if (p < price) break;
            sum += vol;
        }
    }
    return sum;
}

std::map<Price, std::int64_t> CumulativeLiquidity::cumulative_ask() const {
    std::map<Price, std::int64_t> out;
    std::int64_t sum = 0;
    for (const auto& [p, vol] : ask_) out[p] = (sum += vol);
    return out;
}

std::map<Price, std::int64_t> CumulativeLiquidity::cumulative_bid() const {
    std::map<Price, std::int64_t> out;
    std::int64_t sum = 0;
    for (const auto& [p, vol] : bid_) out[p] = (sum += vol);
    return out;
}

std::int64_t CumulativeLiquidity::total(Side side) const {
    return side == Side::Ask ? level_total(ask_) : level_total(bid_);
}

CumulativeLiquidity apply_event(CumulativeLiquidity book, const MarketEvent& ev) {
    if (ev.is_trade()) {
        if (ev.volume > book.total(ev.side))
            throw Error(Errc::TradeExceedsLiquidity, "trade volume " + std::to_string(ev.volume) +
                                                         " exceeds resting " + side_name(ev.side) + " liquidity");
        if (ev.side == Side::Ask)
            consume(book.ask_, ev.volume);
        else
            consume(book.bid_, ev.volume);
        return book;
    }

    if (ev.best_ask <= ev.best_bid) throw Error(Errc::CrossedBook, "update would cross the book");
    const std::int64_t opening = ev.volume > 0 ? ev.volume : 1;
    book.ask_.erase(book.ask_.begin(), book.ask_.lower_bound(ev.best_ask));
    if (!book.ask_.contains(ev.best_ask)) book.ask_[ev.best_ask] = opening;
    book.bid_.erase(book.bid_.begin(), book.bid_.lower_bound(ev.best_bid));
    if (!book.bid_.contains(ev.best_bid)) book.bid_[ev.best_bid] = opening;
    return book;
}

} // namespace fairprice
