#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fairprice {

/// Price as an integer number of price steps. The step size lives on the
/// owning EventStream, so two prices are only comparable within one stream.
struct Price {
    std::int64_t steps = 0;

    constexpr auto operator<=>(const Price&) const = default;
    constexpr Price operator+(std::int64_t d) const { return Price{steps + d}; }
    constexpr Price operator-(std::int64_t d) const { return Price{steps - d}; }
    constexpr std::int64_t operator-(Price other) const { return steps - other.steps; }
};

/// Fixed-point resolution used for decimal price text: 1e-9 currency units.
inline constexpr std::int64_t kNanosPerUnit = 1'000'000'000;

/// Price grid of one asset. `step_nanos` is the price step in 1e-9 units.
class PriceScale {
public:
    PriceScale() = default;
    explicit PriceScale(std::int64_t step_nanos);

    static PriceScale from_step(double step);

    std::int64_t step_nanos() const noexcept { return step_nanos_; }
    double step() const noexcept { return static_cast<double>(step_nanos_) / kNanosPerUnit; }

    double to_currency(Price p) const noexcept { return static_cast<double>(p.steps) * step(); }
    double to_currency(std::int64_t step_count) const noexcept {
        return static_cast<double>(step_count) * step();
    }

    /// Nearest grid price (ties away from zero).
    Price round(double value) const;

    /// Exact parse of a decimal string. Throws PriceOffGrid when the value is
    /// not a multiple of the step, ParseError when the text is not a number.
    Price parse(std::string_view text) const;

    /// Shortest exact decimal rendering of `p`.
    std::string format(Price p) const;

    bool operator==(const PriceScale&) const = default;

private:
    std::int64_t step_nanos_ = 1;
};

/// Parses a decimal string into 1e-9 units. Returns false on malformed input
/// or more than nine fractional digits that are not zero.
bool parse_decimal_nanos(std::string_view text, std::int64_t& out);

std::string format_decimal_nanos(std::int64_t nanos);

} // namespace fairprice
