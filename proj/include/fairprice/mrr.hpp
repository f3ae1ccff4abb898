#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairprice/event_stream.hpp"
#include "fairprice/market_event.hpp"

namespace fairprice::mrr {

/// Sign of a market order: +1 buy (trades at the ask), -1 sell (at the bid).
enum class Sign : std::int8_t { Sell = -1, Buy = 1 };

constexpr int value(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::Buy ? Sign::Sell : Sign::Buy; }
constexpr Side trade_side(Sign s) noexcept { return s == Sign::Buy ? Side::Ask : Side::Bid; }

struct MrrParams {
    double rho = 0.5;        // sign autocorrelation, 0 < rho < 1
    double theta = 1.0;      // impact per unit surprise, > 0
    double p0 = 100.0;       // initial fair price
    double noise_std = 0.0;  // std of the exogenous fair-price noise
    std::uint64_t seed = 0;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

struct MrrState {
    Sign eps_prev = Sign::Buy;
    double p = 0.0;
    std::int64_t n = 0;
};

struct Quote {
    double ask = 0.0;
    double bid = 0.0;
};

struct MrrTrade {
    Sign sign = Sign::Buy;
    double price = 0.0;
};

struct StepResult {
    MrrState state;
    MrrTrade trade;
};

/// Random source for the simulator. Uniforms are built from the top 53 bits
/// of a 64-bit Mersenne twister so the sign sequence does not depend on the
/// standard library's distribution implementation.
class MrrRng {
public:
    explicit MrrRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal(double stddev) { return stddev * normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// P[eps_n = +1 | eps_{n-1}] = (1 + rho * eps_{n-1}) / 2.
double sign_prob_up(double rho, Sign eps_prev);

/// Zero-ex-post-gain quotes: ask = p + theta(1 - rho eps), bid = p + theta(-1 - rho eps).
Quote quote(const MrrParams& params, const MrrState& state);

/// Draws eps_n, trades at the quote on its side, then moves the fair price by
/// theta (eps_n - rho eps_{n-1}) + zeta_n.
StepResult step(const MrrParams& params, const MrrState& state, MrrRng& rng);

/// How a simulated path is written out as an event stream.
struct EmissionSpec {
    std::string asset_id = "MRR";
    std::int64_t interval_ns = 1'000'000'000;
    /// Reporting tick; 0 means theta / 2, which places the 2 theta spread at two ticks.
    double tick = 0.0;
    /// Price grid; 0 means tick / 100.
    double price_step = 0.0;

    double resolved_tick(const MrrParams& params) const;
    double resolved_step(const MrrParams& params) const;
};

/// Arrays are indexed by step n = 0..N-1: the order sign eps_n, the fair
/// price p_n before the order, and the quotes a_n, b_n the order faced.
struct MrrPath {
    std::vector<Sign> sign;
    std::vector<double> fair;
    std::vector<double> ask;
    std::vector<double> bid;
    EventStream stream;
};

/// Runs `n_steps` orders. The emitted stream opens with one quote at ts 0;
/// step n then produces a unit trade and the next quote, both stamped at
/// n * interval_ns. Identical params and spec give bit-identical output.
MrrPath simulate(const MrrParams& params, std::size_t n_steps, const EmissionSpec& spec = {});

struct OracleResult {
    /// Partial expectation of (next trade price - p_n) over the first `depth` orders.
    double value = 0.0;
    /// Bound on the absolute contribution of paths with no `side` trade within `depth`.
    double tail_bound = 0.0;
    std::size_t depth = 0;
};

/// E[next `side` trade price - p_n | eps_{n-1}] by dynamic programming over
/// the two-state sign chain. Requires noise_std == 0. Throws DepthTooSmall
/// (message carries the depth that would suffice) when tail_bound > max_tail.
OracleResult oracle_next_trade_expectation(const MrrParams& params, Side side, Sign eps_prev,
                                           std::size_t depth, double max_tail);

OracleResult oracle_next_ask_expectation(const MrrParams& params, Sign eps_prev, std::size_t depth,
                                         double max_tail);
OracleResult oracle_next_bid_expectation(const MrrParams& params, Sign eps_prev, std::size_t depth,
                                         double max_tail);

/// Smallest depth whose tail bound is <= max_tail (capped at `limit`).
std::size_t required_oracle_depth(const MrrParams& params, Side side, Sign eps_prev,
                                  double max_tail, std::size_t limit = 100'000'000);

struct AverageMarketImpact {
    double ask = 0.0;
    double bid = 0.0;
};

/// a - p and b - p; their difference is the spread 2 theta.
AverageMarketImpact analytic_ami(const MrrParams& params, Sign eps_prev);

} // namespace fairprice::mrr
