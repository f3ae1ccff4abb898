#include <random>

#include <gtest/gtest.h>

#include "fairprice/error.hpp"
#include "fairprice/event_stream.hpp"
#include "fairprice/liquidity.hpp"
#include "test_support.hpp"

using namespace fairprice;
using namespace fairprice::testing;

namespace {

MarketEvent book_trade(Side side, std::int64_t volume) {
    MarketEvent ev;
    ev.kind = EventKind::Trade;
    ev.side = side;
    ev.volume = volume;
    return ev;
}

// O(n^2) forward scan for the first `side` trade at (or strictly after) i.
std::size_t naive_next(const EventStream& s, Side side, std::size_t i, bool strict) {
    for (std::size_t j = strict ? i + 1 : i; j < s.size(); ++j)
        if (s[j].is_trade(side)) return j;
    return kNoTrade;
}

} // namespace

TEST(Price, ParseAndFormatAreExact) {
    const auto scale = PriceScale::from_step(0.0001);
    EXPECT_EQ(scale.parse("100.25").steps, 1002500);
    EXPECT_EQ(scale.parse("-0.0003").steps, -3);
    EXPECT_EQ(scale.format(Price{1002500}), "100.25");
    EXPECT_EQ(scale.format(Price{-3}), "-0.0003");
    EXPECT_EQ(scale.format(Price{0}), "0");
    EXPECT_THROW(scale.parse("100.00005"), Error);
    EXPECT_THROW(scale.parse("abc"), Error);
    try {
        scale.parse("1.00001");
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PriceOffGrid);
    }
}

TEST(Liquidity, TradeConsumesWholeFirstLevel) {
    auto book = CumulativeLiquidity::from_cumulative({{cents(10.1), 5}, {cents(10.2), 12}}, {{cents(10.0), 4}});
    book = apply_event(book, book_trade(Side::Ask, 5));
    EXPECT_EQ(book.best_ask(), cents(10.2));
    const auto cum = book.cumulative_ask();
    ASSERT_EQ(cum.size(), 1u);
    EXPECT_EQ(cum.at(cents(10.2)), 7);
}

TEST(Liquidity, PartialTradeKeepsTouch) {
    auto book = CumulativeLiquidity::from_cumulative({{cents(10.1), 5}}, {});
    book = apply_event(book, book_trade(Side::Ask, 2));
    EXPECT_EQ(book.best_ask(), cents(10.1));
    EXPECT_EQ(book.cumulative(Side::Ask, cents(10.1)), 3);
}

TEST(Liquidity, EmptyEventSequenceLeavesBookUnchanged) {
    const auto book = CumulativeLiquidity::from_cumulative({{cents(10.1), 5}}, {{cents(10.0), 3}});
    auto replayed = book;
    for (const MarketEvent& ev : std::vector<MarketEvent>{}) replayed = apply_event(replayed, ev);
    EXPECT_EQ(replayed, book);
}

TEST(Liquidity, Errors) {
    const auto book = CumulativeLiquidity::from_cumulative({{cents(10.1), 5}}, {{cents(10.0), 3}});
    try {
        apply_event(book, book_trade(Side::Bid, 4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TradeExceedsLiquidity);
    }
    try {
        apply_event(book, update(0, 0, 10.1, 10.1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CrossedBook);
    }
    EXPECT_THROW(CumulativeLiquidity::from_cumulative({{cents(10.1), 5}, {cents(10.2), 4}}, {}), Error);
}

TEST(Liquidity, CumulativeStepFunction) {
    const auto book = CumulativeLiquidity::from_cumulative({{cents(10.1), 5}, {cents(10.3), 9}},
                                                           {{cents(9.9), 8}, {cents(10.0), 3}});
    EXPECT_EQ(book.cumulative(Side::Ask, cents(10.0)), 0);
    EXPECT_EQ(book.cumulative(Side::Ask, cents(10.2)), 5);
    EXPECT_EQ(book.cumulative(Side::Ask, cents(10.3)), 9);
    EXPECT_EQ(book.cumulative(Side::Bid, cents(10.05)), 0);
    EXPECT_EQ(book.cumulative(Side::Bid, cents(9.95)), 3);
    EXPECT_EQ(book.cumulative(Side::Bid, cents(9.0)), 8);
    EXPECT_EQ(book.best_bid(), cents(10.0));
}

TEST(Liquidity, ReplayNeverCrosses) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        const EventStream s = random_stream(rng, 30);
        CumulativeLiquidity book;
        for (const auto& ev : s.events()) {
            if (ev.is_trade()) {
                // Replenish the touch so the trade is always fillable.
                MarketEvent refill = ev;
                refill.kind = EventKind::BookUpdate;
                refill.volume = ev.volume;
                book = apply_event(book, refill);
            }
            book = apply_event(book, ev);
            if (book.best_ask() && book.best_bid()) {
                ASSERT_GT(*book.best_ask(), *book.best_bid());
            }
        }
    }
}

TEST(MidPrice, Arithmetic) {
    EXPECT_DOUBLE_EQ(mid_price(update(0, 0, 99.5, 100.5), kCents), 100.0);
    EXPECT_NEAR(mid_price(update(0, 0, 10.0, 10.01), kCents), 10.005, 1e-12);
}

TEST(EventStream, RejectsInvalidInput) {
    try {
        cents_stream({update(2, 0, 10.0, 10.1), update(1, 1, 10.0, 10.1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OrderingError);
    }
    try {
        cents_stream({update(1, 0, 10.0, 10.1), update(1, 0, 10.0, 10.1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OrderingError);
    }
    try {
        cents_stream({update(1, 0, 10.1, 10.1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CrossedQuote);
    }
}

TEST(NextTradePrices, InclusiveAndStrict) {
    const auto s = cents_stream({trade(1 * kSec, 0, Side::Ask, 10.1, 10.0, 10.1),
                                 trade(2 * kSec, 1, Side::Bid, 10.0, 10.0, 10.1),
                                 trade(3 * kSec, 2, Side::Ask, 10.2, 10.0, 10.2)});
    const std::size_t at_t2 = s.cut_at(2 * kSec);
    EXPECT_EQ(s.next_price(Side::Ask, at_t2), cents(10.2));
    EXPECT_EQ(s.next_price(Side::Bid, at_t2), cents(10.0));
    EXPECT_EQ(s.next_trade(Side::Ask, 0), 0u);
    EXPECT_EQ(s.next_price_strict(Side::Ask, 0), cents(10.2));
    EXPECT_EQ(s.next_price(Side::Ask, s.size()), std::nullopt);
}

TEST(NextTradePrices, NoBidTradesGivesSentinel) {
    const auto s = cents_stream({trade(1, 0, Side::Ask, 10.1, 10.0, 10.1), update(2, 1, 10.0, 10.2),
                                 trade(3, 2, Side::Ask, 10.2, 10.0, 10.2)});
    for (std::size_t i = 0; i <= s.size(); ++i) EXPECT_EQ(s.next_trade(Side::Bid, i), kNoTrade);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.next_trade_strict(Side::Bid, i), kNoTrade);
}

TEST(NextTradePrices, MatchesNaiveScanAndIsMonotone) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 500; ++round) {
        const EventStream s = random_stream(rng, 20);
        for (Side side : {Side::Ask, Side::Bid}) {
            std::size_t prev = 0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const std::size_t inc = s.next_trade(side, i);
                const std::size_t str = s.next_trade_strict(side, i);
                ASSERT_EQ(inc, naive_next(s, side, i, false));
                ASSERT_EQ(str, naive_next(s, side, i, true));
                if (inc != kNoTrade) {
                    ASSERT_GE(s[inc].order_key(), s[i].order_key());
                    ASSERT_GE(inc, prev);
                    prev = inc;
                }
                if (str != kNoTrade) ASSERT_GT(s[str].order_key(), s[i].order_key());
            }
        }
    }
}

TEST(EventStream, ShiftAndTranslateHelpers) {
    const auto s = cents_stream({update(0, 0, 10.0, 10.1), trade(1, 1, Side::Ask, 10.1, 10.0, 10.1),
                                 trade(2, 2, Side::Bid, 10.0, 10.0, 10.1)});
    EXPECT_TRUE(off_quote_trades(s).empty());
    const auto shifted = with_shifted_trades(s, Side::Ask, 10);
    EXPECT_EQ(shifted[1].price, cents(10.2));
    EXPECT_EQ(shifted[2].price, cents(10.0));
    EXPECT_EQ(off_quote_trades(shifted), std::vector<std::size_t>{1});
    const auto moved = with_translated_prices(s, 100);
    EXPECT_EQ(moved[2].best_ask, cents(11.1));
    EXPECT_TRUE(off_quote_trades(moved).empty());
}
