#include "fairprice/error.hpp"

namespace fairprice {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::TradeExceedsLiquidity: return "TradeExceedsLiquidity";
    case Errc::CrossedBook: return "CrossedBook";
    case Errc::DepthTooSmall: return "DepthTooSmall";
    case Errc::EmptyConditioning: return "EmptyConditioning";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ParseError: return "ParseError";
    case Errc::OrderingError: return "OrderingError";
    case Errc::CrossedQuote: return "CrossedQuote";
    case Errc::PriceOffGrid: return "PriceOffGrid";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& what, std::optional<std::size_t> row) {
    std::string msg = errc_name(code);
    if (row) msg += " at row " + std::to_string(*row);
    msg += ": ";
    msg += what;
    return msg;
}

} // namespace

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> row)
    : std::runtime_error(decorate(code, what, row)), code_(code), row_(row) {}

} // namespace fairprice
