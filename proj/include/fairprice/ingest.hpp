#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fairprice/event_stream.hpp"
#include "fairprice/grid.hpp"

namespace fairprice {

/// Per-asset settings, read from a `key=value` text file.
struct AssetConfig {
    std::string asset_id;
    double tick = 0.01;
    double price_step = 0.0001;
    /// Session bounds in ns since midnight; inferred from the data when absent.
    std::optional<std::int64_t> session_start_ns;
    std::optional<std::int64_t> session_end_ns;
    GridSpec grid;

    /// Throws InvalidArgument unless tick > 0, price_step divides tick,
    /// trims >= 0 and dt > 0.
    void validate() const;

    PriceScale scale() const { return PriceScale::from_step(price_step); }
    std::int64_t tick_steps() const;
};

/// Keys: asset_id, tick, price_step, trim_head_s, trim_tail_s, grid_dt_s,
/// session_start_s, session_end_s. '#' starts a comment. Unknown keys are a
/// ParseError.
AssetConfig parse_asset_config(const std::string& text);
AssetConfig load_asset_config(const std::filesystem::path& path);
std::string format_asset_config(const AssetConfig& config);
void save_asset_config(const std::filesystem::path& path, const AssetConfig& config);

inline constexpr const char* kCsvHeader = "ts_ns,seq,kind,side,price,volume,best_bid,best_ask";

/// Parses CSV text in the event schema. Records outside the configured
/// session bounds are dropped. Throws ParseError, OrderingError,
/// CrossedQuote or PriceOffGrid with the offending data row.
EventStream parse_session(const std::string& csv_text, const AssetConfig& config);
EventStream load_session(const std::filesystem::path& path, const AssetConfig& config);

std::string format_session(const EventStream& stream);
void save_session(const std::filesystem::path& path, const EventStream& stream);

/// Config describing `stream` (id, tick, step, session bounds) with `grid`.
AssetConfig config_for(const EventStream& stream, const GridSpec& grid);

} // namespace fairprice
