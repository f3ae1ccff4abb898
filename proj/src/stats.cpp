#include "fairprice/stats.hpp"

#include <cmath>

#include "fairprice/error.hpp"

namespace fairprice {

double Accumulator::mean_steps() const noexcept {
    if (count_ == 0) return 0.0;
    return static_cast<double>(static_cast<long double>(sum_) / count_);
}

double Accumulator::variance_steps() const noexcept {
    if (count_ < 2) return 0.0;
    // n * sumsq - sum^2 is exact in 128 bits for any realistic price range.
    const __int128 scaled = static_cast<__int128>(count_) * sumsq_ - sum_ * sum_;
    const long double n = count_;
    return static_cast<double>(static_cast<long double>(scaled) / (n * (n - 1)));
}

StatResult summarize(const Accumulator& acc, const PriceScale& scale, double tick) {
    if (acc.count() == 0) throw Error(Errc::EmptyConditioning, "no sample satisfies the conditioning event");
    StatResult r;
    r.count = acc.count();
    r.estimate = acc.mean_steps() * scale.step();
    if (acc.count() >= 2)
        r.std_error = std::sqrt(acc.variance_steps() / static_cast<double>(acc.count())) * scale.step();
    r.estimate_in_ticks = r.estimate / tick;
    return r;
}

double stderr_of_mean(std::span<const double> samples) {
    if (samples.size() < 2) throw Error(Errc::TooFewSamples, "standard error needs at least two samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

} // namespace fairprice
