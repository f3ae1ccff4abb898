#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairprice/conditioning.hpp"
#include "fairprice/event_stream.hpp"
#include "fairprice/grid.hpp"
#include "fairprice/stats.hpp"

namespace fairprice {

// Accumulating forms are what sessions merge on; the StatResult forms
// summarize them and throw EmptyConditioning on zero count.

/// Samples na_t - nb_t on the grid where E holds and both next trades exist.
Accumulator accumulate_delta_i(const EventStream& stream, const GridSpec& grid,
                               const ConditioningEvent& cond);
StatResult delta_i(const EventStream& stream, const GridSpec& grid, const ConditioningEvent& cond);

/// Samples (trade price - next same-side trade price strictly after) over the
/// `side` trades inside `window` where E holds. Side::Ask gives Delta A,
/// Side::Bid gives Delta B.
Accumulator accumulate_delta_side(const EventStream& stream, Side side,
                                  const ConditioningEvent& cond, const TimeWindow& window);
StatResult delta_side(const EventStream& stream, Side side, const ConditioningEvent& cond,
                      const TimeWindow& window);

StatResult delta_A(const EventStream& stream, const ConditioningEvent& cond);
StatResult delta_A(const EventStream& stream, const ConditioningEvent& cond, const TimeWindow& window);
StatResult delta_B(const EventStream& stream, const ConditioningEvent& cond);
StatResult delta_B(const EventStream& stream, const ConditioningEvent& cond, const TimeWindow& window);

struct ResponseAccumulator {
    Side side = Side::Ask;
    std::vector<std::int64_t> deltas_ns;
    std::vector<Accumulator> per_delta;
    std::int64_t trades = 0;

    /// Throws InvalidArgument when sides or delta grids differ.
    void merge(const ResponseAccumulator& other);
};

struct ResponsePoint {
    double delta_s = 0.0;
    double value = 0.0;
    std::int64_t count = 0;
    std::optional<double> std_error;
};

/// RA^P(delta) - RA^P(0+) (or the bid counterpart) at each delta with at
/// least one sample. Deltas with no sample are omitted.
struct ResponseCurve {
    Side side = Side::Ask;
    std::int64_t trades = 0;
    std::vector<ResponsePoint> points;
};

/// Per `side` trade at t: next same-side trade price at or after t + delta
/// minus the next same-side trade price strictly after t. Deltas must be
/// positive and ascending.
ResponseAccumulator accumulate_response(const EventStream& stream, Side side,
                                        const std::vector<std::int64_t>& deltas_ns,
                                        const TimeWindow& window);

ResponseCurve summarize_response(const ResponseAccumulator& acc, const PriceScale& scale);

/// Throws EmptyConditioning when the stream has no `side` trades in window.
ResponseCurve response_curve(const EventStream& stream, Side side,
                             const std::vector<double>& deltas_s);
ResponseCurve response_curve(const EventStream& stream, Side side,
                             const std::vector<double>& deltas_s, const TimeWindow& window);

/// 30 log-spaced lags from 0.01 s to 600 s.
std::vector<double> default_response_deltas();

std::vector<std::int64_t> deltas_to_ns(const std::vector<double>& deltas_s);

/// Quoted spread (in steps) in force just before each grid point.
Accumulator accumulate_spread(const EventStream& stream, const GridSpec& grid);

/// Time-averaged quoted spread over the grid (quote in force just before each
/// point); nullopt when no grid point has a prior quote.
std::optional<double> mean_spread(const EventStream& stream, const GridSpec& grid);

} // namespace fairprice
