#include "fairprice/price.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "fairprice/error.hpp"

namespace fairprice {

bool parse_decimal_nanos(std::string_view text, std::int64_t& out) {
    if (text.empty()) return false;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return false;

    std::int64_t whole = 0;
    if (!int_part.empty()) {
        auto [ptr, ec] = std::from_chars(int_part.data(), int_part.data() + int_part.size(), whole);
        if (ec != std::errc{} || ptr != int_part.data() + int_part.size()) return false;
    }
    std::int64_t frac = 0;
    std::int64_t scale = kNanosPerUnit;
    for (std::size_t i = 0; i < frac_part.size(); ++i) {
        const char c = frac_part[i];
        if (c < '0' || c > '9') return false;
        if (i < 9) {
            scale /= 10;
            frac += (c - '0') * scale;
        } else if (c != '0') {
            return false;
        }
    }
    if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / kNanosPerUnit) return false;
    out = whole * kNanosPerUnit + frac;
    if (negative) out = -out;
    return true;
}

std::string format_decimal_nanos(std::int64_t nanos) {
    std::string sign = nanos < 0 ? "-" : "";
    const std::uint64_t mag = nanos < 0 ? 0ULL - static_cast<std::uint64_t>(nanos) : static_cast<std::uint64_t>(nanos);
    std::string out = sign + std::to_string(mag / kNanosPerUnit);
    std::uint64_t frac = mag % kNanosPerUnit;
    if (frac == 0) return out;
    std::string digits = std::to_string(frac);
    digits.insert(0, 9 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    return out + "." + digits;
}

PriceScale::PriceScale(std::int64_t step_nanos) : step_nanos_(step_nanos) {
    if (step_nanos <= 0) throw Error(Errc::InvalidArgument, "price step must be positive");
}

PriceScale PriceScale::from_step(double step) {
    const double nanos = std::round(step * kNanosPerUnit);
    if (!(nanos >= 1.0) || std::abs(nanos - step * kNanosPerUnit) > 1e-3)
        throw Error(Errc::InvalidArgument, "price step must be a positive multiple of 1e-9");
    return PriceScale(static_cast<std::int64_t>(nanos));
}

Price PriceScale::round(double value) const {
    return Price{std::llround(value / step())};
}

Price PriceScale::parse(std::string_view text) const {
    std::int64_t nanos = 0;
    if (!parse_decimal_nanos(text, nanos))
        throw Error(Errc::ParseError, "malformed price '" + std::string(text) + "'");
    if (nanos % step_nanos_ != 0)
        throw Error(Errc::PriceOffGrid, "price '" + std::string(text) + "' is not a multiple of " +
                                            format_decimal_nanos(step_nanos_));
    return Price{nanos / step_nanos_};
}

std::string PriceScale::format(Price p) const {
    return format_decimal_nanos(p.steps * step_nanos_);
}

} // namespace fairprice
