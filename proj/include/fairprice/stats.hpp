#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "fairprice/price.hpp"

namespace fairprice {

/// Running sums of step-valued samples. Sums are exact 128-bit integers, so
/// merging is associative and commutative bit for bit.
class Accumulator {
public:
    void add(std::int64_t steps) noexcept {
        ++count_;
        sum_ += steps;
        sumsq_ += static_cast<__int128>(steps) * steps;
    }

    void merge(const Accumulator& other) noexcept {
        count_ += other.count_;
        sum_ += other.sum_;
        sumsq_ += other.sumsq_;
    }

    std::int64_t count() const noexcept { return count_; }
    double mean_steps() const noexcept;
    /// Unbiased sample variance; needs count >= 2.
    double variance_steps() const noexcept;

    bool operator==(const Accumulator&) const = default;

private:
    std::int64_t count_ = 0;
    __int128 sum_ = 0;
    __int128 sumsq_ = 0;
};

struct StatResult {
    double estimate = 0.0;
    std::int64_t count = 0;
    /// i.i.d. standard error of the mean; empty when count < 2.
    std::optional<double> std_error;
    double estimate_in_ticks = 0.0;
};

/// Throws EmptyConditioning when the accumulator holds no samples.
StatResult summarize(const Accumulator& acc, const PriceScale& scale, double tick);

/// Sample standard deviation / sqrt(n). Throws TooFewSamples for n < 2.
double stderr_of_mean(std::span<const double> samples);

} // namespace fairprice
