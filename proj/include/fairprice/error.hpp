#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fairprice {

enum class Errc {
    InvalidArgument,
    TradeExceedsLiquidity,
    CrossedBook,
    DepthTooSmall,
    EmptyConditioning,
    TooFewSamples,
    ParseError,
    OrderingError,
    CrossedQuote,
    PriceOffGrid,
    Io,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> row = std::nullopt);

    Errc code() const noexcept { return code_; }

    /// 1-based data row (header excluded) for ingest failures.
    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    Errc code_;
    std::optional<std::size_t> row_;
};

} // namespace fairprice
