#include "fairprice/mrr.hpp"

#include <array>
#include <cmath>

#include "fairprice/error.hpp"

namespace fairprice::mrr {

void MrrParams::validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw Error(Errc::InvalidArgument, "rho must lie in (0, 1)");
    if (!(theta > 0.0)) throw Error(Errc::InvalidArgument, "theta must be positive");
    if (!(noise_std >= 0.0)) throw Error(Errc::InvalidArgument, "noise_std must be >= 0");
    if (!std::isfinite(p0)) throw Error(Errc::InvalidArgument, "p0 must be finite");
}

double sign_prob_up(double rho, Sign eps_prev) {
    return 0.5 * (1.0 + rho * value(eps_prev));
}

Quote quote(const MrrParams& params, const MrrState& state) {
    const double e = value(state.eps_prev);
    return Quote{state.p + params.theta * (1.0 - params.rho * e),
                 state.p + params.theta * (-1.0 - params.rho * e)};
}

StepResult step(const MrrParams& params, const MrrState& state, MrrRng& rng) {
    const Quote q = quote(params, state);
    const Sign eps = rng.uniform() < sign_prob_up(params.rho, state.eps_prev) ? Sign::Buy : Sign::Sell;
    double dp = params.theta * (value(eps) - params.rho * value(state.eps_prev));
    if (params.noise_std > 0.0) dp += rng.normal(params.noise_std);

    StepResult out;
    out.trade = MrrTrade{eps, eps == Sign::Buy ? q.ask : q.bid};
    out.state = MrrState{eps, state.p + dp, state.n + 1};
    return out;
}

double EmissionSpec::resolved_tick(const MrrParams& params) const {
    return tick > 0.0 ? tick : params.theta / 2.0;
}

double EmissionSpec::resolved_step(const MrrParams& params) const {
    return price_step > 0.0 ? price_step : resolved_tick(params) / 100.0;
}

MrrPath simulate(const MrrParams& params, std::size_t n_steps, const EmissionSpec& spec) {
    params.validate();
    if (n_steps == 0) throw Error(Errc::InvalidArgument, "n_steps must be >= 1");
    if (spec.interval_ns <= 0) throw Error(Errc::InvalidArgument, "interval must be positive");

    const PriceScale scale = PriceScale::from_step(spec.resolved_step(params));
    const double tick = spec.resolved_tick(params);
    const std::int64_t tick_steps = std::llround(tick / scale.step());
    if (tick_steps <= 0 || std::abs(tick_steps * scale.step() - tick) > 1e-9 * tick)
        throw Error(Errc::InvalidArgument, "price step must divide the tick");
    // The model spread is exactly 2 theta; quotes are emitted as bid + spread
    // so the grid spread never wobbles by a rounding step.
    const std::int64_t spread_steps = std::llround(2.0 * params.theta / scale.step());
    if (spread_steps <= 0) throw Error(Errc::InvalidArgument, "price step is coarser than the spread");

    MrrRng rng(params.seed);
    MrrState state{rng.uniform() < 0.5 ? Sign::Sell : Sign::Buy, params.p0, 0};

    MrrPath path;
    path.sign.reserve(n_steps);
    path.fair.reserve(n_steps);
    path.ask.reserve(n_steps);
    path.bid.reserve(n_steps);
    std::vector<MarketEvent> events;
    events.reserve(2 * n_steps + 1);

    auto quote_event = [&](const MrrState& s, std::int64_t ts, std::int64_t seq) {
        const Price bid = scale.round(quote(params, s).bid);
        MarketEvent ev;
        ev.ts_ns = ts;
        ev.seq = seq;
        ev.kind = EventKind::BookUpdate;
        ev.best_bid = bid;
        ev.best_ask = bid + spread_steps;
        return ev;
    };

    events.push_back(quote_event(state, 0, 0));
    for (std::size_t n = 0; n < n_steps; ++n) {
        const Quote q = quote(params, state);
        const StepResult r = step(params, state, rng);
        path.sign.push_back(r.trade.sign);
        path.fair.push_back(state.p);
        path.ask.push_back(q.ask);
        path.bid.push_back(q.bid);

        const std::int64_t ts = static_cast<std::int64_t>(n) * spec.interval_ns;
        const MarketEvent& prevailing = events.back();
        MarketEvent trade;
        trade.ts_ns = ts;
        trade.seq = static_cast<std::int64_t>(2 * n + 1);
        trade.kind = EventKind::Trade;
        trade.side = trade_side(r.trade.sign);
        trade.price = trade.side == Side::Ask ? prevailing.best_ask : prevailing.best_bid;
        trade.volume = 1;
        trade.best_bid = prevailing.best_bid;
        trade.best_ask = prevailing.best_ask;
        events.push_back(trade);
        events.push_back(quote_event(r.state, ts, static_cast<std::int64_t>(2 * n + 2)));

        state = r.state;
    }

    const TimeWindow session{0, static_cast<std::int64_t>(n_steps) * spec.interval_ns};
    path.stream = EventStream(spec.asset_id, scale, tick_steps, std::move(events), session);
    return path;
}

namespace {

/// Forward DP over the sign chain until the first `side` order.
class NextTradeDp {
public:
    NextTradeDp(const MrrParams& params, Side side, Sign eps_prev) : params_(params), side_(side) {
        mass_[slot(eps_prev)] = 1.0;
    }

    void advance() {
        const Sign finishing = side_ == Side::Ask ? Sign::Buy : Sign::Sell;
        const Sign continuing = flip(finishing);
        std::array<double, 2> mass{0.0, 0.0};
        std::array<double, 2> moment{0.0, 0.0};
        for (Sign s : {Sign::Sell, Sign::Buy}) {
            const double m = mass_[slot(s)];
            if (m == 0.0) continue;
            const double e = mrr::value(s);
            const double p_up = sign_prob_up(params_.rho, s);
            const double p_fin = finishing == Sign::Buy ? p_up : 1.0 - p_up;
            const double offset = params_.theta * (mrr::value(finishing) - params_.rho * e);
            value_ += p_fin * (moment_[slot(s)] + m * offset);
            const double move = params_.theta * (mrr::value(continuing) - params_.rho * e);
            mass[slot(continuing)] += (1.0 - p_fin) * m;
            moment[slot(continuing)] += (1.0 - p_fin) * (moment_[slot(s)] + m * move);
        }
        mass_ = mass;
        moment_ = moment;
        ++depth_;
    }

    double value() const { return value_; }
    std::size_t depth() const { return depth_; }

    /// Every step moves p by at most theta(1+rho) and every quote sits within
    /// theta(1+rho) of p, so a first trade at offset k is worth at most
    /// (k+1) theta (1+rho). Survival decays at least by c = (1+rho)/2 per step.
    double tail_bound() const {
        const double remaining = mass_[0] + mass_[1];
        const double c = 0.5 * (1.0 + params_.rho);
        return params_.theta * (1.0 + params_.rho) * remaining *
               (static_cast<double>(depth_) + 1.0 + c / (1.0 - c));
    }

private:
    static std::size_t slot(Sign s) { return s == Sign::Buy ? 1 : 0; }

    const MrrParams& params_;
    Side side_;
    std::array<double, 2> mass_{0.0, 0.0};
    std::array<double, 2> moment_{0.0, 0.0};
    double value_ = 0.0;
    std::size_t depth_ = 0;
};

void check_oracle_params(const MrrParams& params) {
    params.validate();
    if (params.noise_std != 0.0)
        throw Error(Errc::InvalidArgument, "the next-trade oracle requires noise_std == 0");
}

} // namespace

std::size_t required_oracle_depth(const MrrParams& params, Side side, Sign eps_prev, double max_tail,
                                  std::size_t limit) {
    check_oracle_params(params);
    NextTradeDp dp(params, side, eps_prev);
    do {
        dp.advance();
    } while (dp.tail_bound() > max_tail && dp.depth() < limit);
    return dp.depth();
}

OracleResult oracle_next_trade_expectation(const MrrParams& params, Side side, Sign eps_prev,
                                           std::size_t depth, double max_tail) {
    check_oracle_params(params);
    if (depth < 1) throw Error(Errc::InvalidArgument, "depth must be >= 1");
    NextTradeDp dp(params, side, eps_prev);
    for (std::size_t k = 0; k < depth; ++k) dp.advance();
    OracleResult out{dp.value(), dp.tail_bound(), depth};
    if (out.tail_bound > max_tail) {
        const std::size_t needed = required_oracle_depth(params, side, eps_prev, max_tail);
        throw Error(Errc::DepthTooSmall, "tail bound " + std::to_string(out.tail_bound) + " exceeds " +
                                             std::to_string(max_tail) + " at depth " + std::to_string(depth) +
                                             "; depth " + std::to_string(needed) + " is sufficient");
    }
    return out;
}

OracleResult oracle_next_ask_expectation(const MrrParams& params, Sign eps_prev, std::size_t depth,
                                         double max_tail) {
    return oracle_next_trade_expectation(params, Side::Ask, eps_prev, depth, max_tail);
}

OracleResult oracle_next_bid_expectation(const MrrParams& params, Sign eps_prev, std::size_t depth,
                                         double max_tail) {
    return oracle_next_trade_expectation(params, Side::Bid, eps_prev, depth, max_tail);
}

AverageMarketImpact analytic_ami(const MrrParams& params, Sign eps_prev) {
    params.validate();
    const double e = value(eps_prev);
    return AverageMarketImpact{params.theta * (1.0 - params.rho * e), -params.theta * (1.0 + params.rho * e)};
}

} // namespace fairprice::mrr
