#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fairprice/error.hpp"
#include "fairprice/fairtests.hpp"
#include "fairprice/mrr.hpp"
#include "test_support.hpp"

using namespace fairprice;
using namespace fairprice::testing;

namespace {

const EventStream& mrr_stream() {
    static const mrr::MrrPath path =
        mrr::simulate(mrr::MrrParams{.rho = 0.5, .theta = 1.0, .p0 = 100.0, .noise_std = 0.0, .seed = 101}, 200000);
    return path.stream;
}

const GridSpec kNoTrim = GridSpec::untrimmed(10 * kSec);

} // namespace

TEST(Conditioning, LastTradeSide) {
    const auto s = cents_stream({update(0, 0, 10.0, 10.1), trade(1, 1, Side::Ask, 10.1, 10.0, 10.1)});
    EXPECT_TRUE(evaluate_conditioning(s, 2, Condition::LastTradeBuy));
    EXPECT_FALSE(evaluate_conditioning(s, 2, Condition::LastTradeSell));
    // The trade at cut 1 is not in the strict past.
    EXPECT_FALSE(evaluate_conditioning(s, 1, Condition::LastTradeBuy));
    EXPECT_FALSE(evaluate_conditioning(s, 1, Condition::LastTradeSell));
    EXPECT_TRUE(evaluate_conditioning(s, 0, Condition::All));
}

TEST(Conditioning, LastMidMove) {
    const auto s = cents_stream({update(0, 0, 99.5, 100.5), update(1, 1, 100.0, 101.0), update(2, 2, 99.75, 100.75),
                                 update(3, 3, 99.75, 100.75)});
    EXPECT_FALSE(evaluate_conditioning(s, 4, Condition::LastMidUp));
    EXPECT_TRUE(evaluate_conditioning(s, 4, Condition::LastMidDown));
    EXPECT_TRUE(evaluate_conditioning(s, 2, Condition::LastMidUp));
    EXPECT_FALSE(evaluate_conditioning(s, 1, Condition::LastMidUp));
    EXPECT_FALSE(evaluate_conditioning(s, 1, Condition::LastMidDown));
}

TEST(Conditioning, CustomPredicateSeesOnlyThePast) {
    std::size_t seen = 0;
    const auto cond = ConditioningEvent::custom("len", [&](std::span<const MarketEvent> past) {
        seen = past.size();
        return past.size() % 2 == 0;
    });
    const auto s = cents_stream({update(0, 0, 10.0, 10.1), update(1, 1, 10.0, 10.2), update(2, 2, 10.0, 10.3)});
    EXPECT_FALSE(cond.evaluate(s, 1));
    EXPECT_EQ(seen, 1u);
    EXPECT_TRUE(cond.evaluate(s, 2));
    EXPECT_THROW(cond.evaluate(s, 4), Error);
    EXPECT_EQ(cond.name(), "len");
}

TEST(Conditioning, IndexMatchesReferenceScan) {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 300; ++round) {
        const EventStream s = random_stream(rng, 25);
        const PastStateIndex index(s);
        for (const auto& cond : ConditioningEvent::standard())
            for (std::size_t cut = 0; cut <= s.size(); ++cut)
                ASSERT_EQ(index.holds(cond, cut), evaluate_conditioning(s, cut, cond));
    }
}

TEST(DeltaI, HandStream) {
    const auto s = cents_stream({trade(1 * kSec, 0, Side::Ask, 10.1, 10.0, 10.1),
                                 trade(12 * kSec, 1, Side::Bid, 10.0, 10.0, 10.2),
                                 trade(23 * kSec, 2, Side::Ask, 10.2, 10.0, 10.2)},
                                TimeWindow{5 * kSec, 25 * kSec});
    const StatResult r = delta_i(s, kNoTrim, Condition::All);
    EXPECT_EQ(r.count, 1);
    EXPECT_NEAR(r.estimate, 0.2, 1e-12);
    EXPECT_NEAR(r.estimate_in_ticks, 2.0, 1e-12);
    EXPECT_FALSE(r.std_error.has_value());
}

TEST(DeltaI, IdenticalNextPricesGiveZero) {
    std::vector<MarketEvent> ev;
    for (int k = 0; k < 40; ++k)
        ev.push_back(trade(k * 3 * kSec, k, k % 3 == 0 ? Side::Bid : Side::Ask, 10.05, 10.0, 10.1));
    const auto s = cents_stream(std::move(ev));
    const StatResult r = delta_i(s, kNoTrim, Condition::All);
    EXPECT_GT(r.count, 5);
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.std_error, 0.0);
}

TEST(DeltaI, EmptyConditioningThrows) {
    const auto s = cents_stream({update(0, 0, 10.0, 10.1), update(20 * kSec, 1, 10.0, 10.1)});
    try {
        delta_i(s, kNoTrim, Condition::All);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyConditioning);
    }
    EXPECT_EQ(accumulate_delta_i(s, kNoTrim, Condition::All).count(), 0);
}

TEST(DeltaSide, HandStream) {
    const auto s = cents_stream({trade(1 * kSec, 0, Side::Ask, 10.1, 10.0, 10.1),
                                 trade(2 * kSec, 1, Side::Bid, 10.0, 10.0, 10.1),
                                 trade(3 * kSec, 2, Side::Ask, 10.2, 10.0, 10.2)});
    const StatResult a = delta_A(s, Condition::All);
    EXPECT_EQ(a.count, 1);
    EXPECT_NEAR(a.estimate, -0.1, 1e-12);
    EXPECT_THROW(delta_B(s, Condition::All), Error);  // lone bid trade has no successor
    // E1 at the first ask trade: no past trade, excluded.
    EXPECT_THROW(delta_A(s, Condition::LastTradeBuy), Error);
    // E2 holds only at the last ask trade, which has no successor.
    EXPECT_THROW(delta_A(s, Condition::LastTradeSell), Error);
}

TEST(DeltaSide, WindowRestrictsTradeTimes) {
    const auto s = cents_stream({trade(1 * kSec, 0, Side::Ask, 10.1, 10.0, 10.1),
                                 trade(3 * kSec, 1, Side::Ask, 10.2, 10.0, 10.2),
                                 trade(5 * kSec, 2, Side::Ask, 10.4, 10.0, 10.4)});
    const StatResult all = delta_A(s, Condition::All);
    EXPECT_EQ(all.count, 2);
    EXPECT_NEAR(all.estimate, -0.15, 1e-12);
    const StatResult late = delta_A(s, Condition::All, TimeWindow{2 * kSec, 10 * kSec});
    EXPECT_EQ(late.count, 1);
    EXPECT_NEAR(late.estimate, -0.2, 1e-12);
}

TEST(Response, LagBelowInterTradeGapIsZero) {
    const auto s = cents_stream({trade(0, 0, Side::Ask, 10.1, 10.0, 10.1), trade(10 * kSec, 1, Side::Ask, 10.3, 10.0, 10.3),
                                 trade(20 * kSec, 2, Side::Ask, 10.2, 10.0, 10.2)});
    const ResponseCurve c = response_curve(s, Side::Ask, {0.5, 5.0, 15.0});
    ASSERT_EQ(c.points.size(), 3u);
    EXPECT_EQ(c.trades, 3);
    EXPECT_EQ(c.points[0].value, 0.0);
    EXPECT_EQ(c.points[1].value, 0.0);
    EXPECT_EQ(c.points[0].count, 2);
    // t=0: na_{15} - na_{0+} = 10.2 - 10.3; t=10: no ask trade at/after 25.
    EXPECT_EQ(c.points[2].count, 1);
    EXPECT_NEAR(c.points[2].value, -0.1, 1e-12);
}

TEST(Response, DegenerateInputs) {
    const auto single = cents_stream({trade(0, 0, Side::Ask, 10.1, 10.0, 10.1)});
    const ResponseCurve c = response_curve(single, Side::Ask, {1.0, 2.0});
    EXPECT_TRUE(c.points.empty());
    EXPECT_EQ(c.trades, 1);
    try {
        response_curve(single, Side::Bid, {1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyConditioning);
    }
    EXPECT_THROW(response_curve(single, Side::Ask, {2.0, 1.0}), Error);
    EXPECT_THROW(response_curve(single, Side::Ask, {0.0}), Error);
}

TEST(Response, DefaultLagGrid) {
    const auto d = default_response_deltas();
    ASSERT_EQ(d.size(), 30u);
    EXPECT_NEAR(d.front(), 0.01, 1e-12);
    EXPECT_NEAR(d.back(), 600.0, 1e-9);
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_NEAR(d[i] / d[i - 1], d[1] / d[0], 1e-9);
}

TEST(StderrOfMean, Examples) {
    const std::vector<double> constant{2.5, 2.5, 2.5};
    EXPECT_EQ(stderr_of_mean(constant), 0.0);
    const std::vector<double> pm{-1.0, 1.0};
    EXPECT_NEAR(stderr_of_mean(pm), 1.0, 1e-15);
    const std::vector<double> one{1.0};
    try {
        stderr_of_mean(one);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TooFewSamples);
    }
}

TEST(Accumulator, SummaryMatchesDirectFormula) {
    Accumulator acc;
    std::vector<double> x;
    for (std::int64_t v : {3, -7, 12, 0, 5, 5}) {
        acc.add(v);
        x.push_back(v * 0.01);
    }
    const StatResult r = summarize(acc, kCents, 0.1);
    EXPECT_NEAR(r.estimate, 0.18 / 6, 1e-15);
    EXPECT_NEAR(*r.std_error, stderr_of_mean(x), 1e-15);
}

TEST(Accumulator, MergeIsOrderIndependent) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
    Accumulator parts[3];
    for (int i = 0; i < 3000; ++i) parts[i % 3].add(d(rng));
    Accumulator ab = parts[0];
    ab.merge(parts[1]);
    ab.merge(parts[2]);
    Accumulator cb = parts[2];
    Accumulator tail = parts[1];
    tail.merge(parts[0]);
    cb.merge(tail);
    EXPECT_EQ(ab, cb);
}

TEST(FairTestsOnMrr, StatisticsAreNearZero) {
    const EventStream& s = mrr_stream();
    for (const auto& cond : ConditioningEvent::standard()) {
        const StatResult d = delta_i(s, kNoTrim, cond);
        EXPECT_LE(std::abs(d.estimate), 4 * *d.std_error) << cond.name();
        EXPECT_LE(std::abs(d.estimate), 2 * s.tick()) << cond.name();
        for (Side side : {Side::Ask, Side::Bid}) {
            const StatResult g = delta_side(s, side, cond, s.session());
            EXPECT_LE(std::abs(g.estimate), 4 * *g.std_error) << cond.name() << side_name(side);
        }
    }
}

TEST(FairTestsOnMrr, ShortLagResponseIsFlat) {
    const EventStream& s = mrr_stream();
    for (Side side : {Side::Ask, Side::Bid}) {
        const ResponseCurve c = response_curve(s, side, {0.5, 1.0, 2.0, 3.0, 5.0});
        ASSERT_EQ(c.points.size(), 5u);
        EXPECT_EQ(c.points[0].value, 0.0);
        for (const auto& p : c.points) EXPECT_LE(std::abs(p.value), 4 * *p.std_error + 1e-12) << p.delta_s;
    }
}

TEST(FairTestsOnMrr, ExclusionSymmetry) {
    const EventStream& s = mrr_stream();
    const auto has_trade = ConditioningEvent::custom("has_trade", [](std::span<const MarketEvent> past) {
        for (const auto& ev : past)
            if (ev.is_trade()) return true;
        return false;
    });
    Accumulator split = accumulate_delta_i(s, kNoTrim, Condition::LastTradeBuy);
    split.merge(accumulate_delta_i(s, kNoTrim, Condition::LastTradeSell));
    EXPECT_EQ(split, accumulate_delta_i(s, kNoTrim, has_trade));
}

TEST(FairTestsOnMrr, TranslationInvariance) {
    const EventStream& s = mrr_stream();
    const EventStream moved = with_translated_prices(s, 12345);
    for (const auto& cond : ConditioningEvent::standard()) {
        EXPECT_EQ(accumulate_delta_i(s, kNoTrim, cond), accumulate_delta_i(moved, kNoTrim, cond));
        EXPECT_EQ(accumulate_delta_side(s, Side::Ask, cond, s.session()),
                  accumulate_delta_side(moved, Side::Ask, cond, moved.session()));
        EXPECT_EQ(accumulate_delta_side(s, Side::Bid, cond, s.session()),
                  accumulate_delta_side(moved, Side::Bid, cond, moved.session()));
    }
}

TEST(FairTestsOnMrr, Deterministic) {
    const EventStream& s = mrr_stream();
    const StatResult a = delta_i(s, kNoTrim, Condition::LastMidUp);
    const StatResult b = delta_i(s, kNoTrim, Condition::LastMidUp);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.count, b.count);
}

TEST(FairTestsOnMrr, ShiftedAsksAreDetected) {
    const EventStream& s = mrr_stream();
    const EventStream shifted = with_shifted_trades(s, Side::Ask, s.tick_steps());
    const StatResult d = delta_i(shifted, kNoTrim, Condition::All);
    EXPECT_NEAR(d.estimate, s.tick(), 4 * *d.std_error);
}

TEST(MeanSpread, UsesQuoteInForce) {
    const EventStream& s = mrr_stream();
    EXPECT_NEAR(*mean_spread(s, kNoTrim), 2.0, 1e-12);
    const auto empty = cents_stream({});
    EXPECT_FALSE(mean_spread(empty, kNoTrim).has_value());
}
