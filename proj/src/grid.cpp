#include "fairprice/grid.hpp"

#include "fairprice/error.hpp"

namespace fairprice {

TimeWindow GridSpec::trimmed(const TimeWindow& session) const {
    TimeWindow w{session.start_ns + trim_head_ns, session.end_ns - trim_tail_ns};
    if (w.end_ns < w.start_ns) w.end_ns = w.start_ns;
    return w;
}

std::vector<std::int64_t> build_grid(const TimeWindow& session, const GridSpec& grid) {
    if (grid.dt_ns <= 0) throw Error(Errc::InvalidArgument, "grid dt must be positive");
    if (grid.trim_head_ns < 0 || grid.trim_tail_ns < 0) throw Error(Errc::InvalidArgument, "trims must be >= 0");
    const TimeWindow w = grid.trimmed(session);
    std::vector<std::int64_t> points;
    // A window shorter than one grid step yields no points.
    if (w.length() == 0 || grid.dt_ns > w.length()) return points;
    points.reserve(static_cast<std::size_t>((w.length() - 1) / grid.dt_ns + 1));
    for (std::int64_t t = w.start_ns; t < w.end_ns; t += grid.dt_ns) points.push_back(t);
    return points;
}

std::vector<std::int64_t> build_grid(const EventStream& stream, const GridSpec& grid) {
    return build_grid(stream.session(), grid);
}

} // namespace fairprice
