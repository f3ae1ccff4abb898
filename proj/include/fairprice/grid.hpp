#pragma once

#include <cstdint>
#include <vector>

#include "fairprice/event_stream.hpp"

namespace fairprice {

inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;

/// Sampling grid and session trimming.
struct GridSpec {
    std::int64_t dt_ns = 10 * kNanosPerSecond;
    std::int64_t trim_head_ns = 3600 * kNanosPerSecond;
    std::int64_t trim_tail_ns = 3600 * kNanosPerSecond;

    /// Session with head and tail cut off; empty when the trims overlap.
    TimeWindow trimmed(const TimeWindow& session) const;

    static GridSpec untrimmed(std::int64_t dt_ns) { return GridSpec{dt_ns, 0, 0}; }
};

/// Points start + k*dt inside the trimmed session, start-inclusive and
/// end-exclusive. Throws InvalidArgument for dt <= 0.
std::vector<std::int64_t> build_grid(const TimeWindow& session, const GridSpec& grid);
std::vector<std::int64_t> build_grid(const EventStream& stream, const GridSpec& grid);

} // namespace fairprice
