#include "relcausal/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace relcausal {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0x6C62272E07BB0142ULL;
}  // namespace

std::uint64_t CounterRng::mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(stream + kStreamSalt))) {}

std::uint64_t CounterRng::stream_of(std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c, std::uint64_t d) {
    std::uint64_t h = mix64(a + kGolden);
    h = mix64(h ^ mix64(b + 2 * kGolden));
    h = mix64(h ^ mix64(c + 3 * kGolden));
    h = mix64(h ^ mix64(d + 4 * kGolden));
    return h;
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_uniform() {
    // 53 random bits, offset by half an ulp so the result stays inside (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_normal() { return inverse_normal_cdf(next_uniform()); }

std::uint64_t CounterRng::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be >= 1");
    return next_u64() % n;
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
    }
    const double q = p < 0.5 ? p : 1.0 - p;
    // Abramowitz-Stegun 26.2.23 start (|error| < 4.5e-4), then three Newton
    // steps on Phi(x) - q using erfc; fixed step count keeps it deterministic.
    const double t = std::sqrt(-2.0 * std::log(q));
    double x = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
    x = -x;  // lower-tail quantile of q
    for (int i = 0; i < 3; ++i) {
        const double cdf = 0.5 * std::erfc(-x * M_SQRT1_2);
        const double pdf = std::exp(-0.5 * x * x) * 0.3989422804014326779;
        x -= (cdf - q) / pdf;
    }
    return p < 0.5 ? x : -x;
}

}  // namespace relcausal
