#pragma once

#include <cstdint>
#include <vector>

namespace relcausal {

// Counter-based random generator. Draw i of stream s under seed k is
// mix64(key(k, s) + i * GOLDEN), so any draw is addressable without
// sequencing state, and identical (seed, stream, counter) triples give
// bit-identical values on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    // SplitMix64 finalizer.
    static std::uint64_t mix64(std::uint64_t z);

    // Combine tag words into a derived stream id.
    static std::uint64_t stream_of(std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0, std::uint64_t d = 0);

    std::uint64_t next_u64();

    // Uniform on (0,1), never exactly 0 or 1.
    double next_uniform();

    // Standard normal via inverse-CDF transform of next_uniform().
    double next_normal();

    // Index in [0, n), n >= 1.
    std::uint64_t next_below(std::uint64_t n);

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Quantile function of the standard normal distribution (accurate to
// ~1e-14 over (0,1); deterministic iteration count).
double inverse_normal_cdf(double p);

}  // namespace relcausal
