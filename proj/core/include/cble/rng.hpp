#pragma once

#include <cstdint>
#include <random>

namespace cble {

/// splitmix64 step; used to derive independent substream seeds from
/// (master seed, cell, path, stream) without correlations between nearby ids.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t path, std::uint64_t stream) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (0xa0761d6478bd642fULL + cell));
    s = splitmix64(s ^ (0xe7037ed1a0b428dbULL + path));
    s = splitmix64(s ^ (0x8ebc6af09c88c6e3ULL + stream));
    return s;
}

/// One named noise source. All variates are derived from explicit inverse /
/// polar transforms over the engine's raw output so behaviour depends only on
/// this file, not on the standard library's distribution internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    /// uniform on [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// uniform on (0, 1], never zero (safe under log / negative powers)
    double uniform_pos() {
        return 1.0 - uniform();
    }

    double normal() {
        // Marsaglia polar without caching the second variate.
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0)
                return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    double exponential(double rate) {
        return -std::log(uniform_pos()) / rate;
    }

    /// Poisson by inversion; intended for small means (simulation steps keep
    /// the candidate mean at or below 0.1).
    int poisson(double mean) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        while (u >= cdf && k < 1000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cble
