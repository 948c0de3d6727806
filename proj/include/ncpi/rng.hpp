#pragma once

#include <cstdint>
#include <cmath>
#include <complex>

namespace ncpi {

/// splitmix64 step (Steele/Lea/Flood). The whole artifact draws randomness
/// from this one generator family so that seeded runs replay exactly.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG stream. Streams are derived from (master seed, trial,
/// purpose) so trials are independent and order-insensitive.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng stream(std::uint64_t master, std::uint64_t trial, std::uint64_t purpose) {
        std::uint64_t s = master;
        s ^= 0x9E3779B97F4A7C15ULL * (trial + 1);
        s ^= 0xC2B2AE3D27D4EB4FULL * (purpose + 1);
        std::uint64_t st = s;
        return Rng(splitmix64_next(st));
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi], inclusive. Lemire reduction, no modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return lo + static_cast<std::int64_t>(next_u64());  // full 64-bit span
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * range;
        std::uint64_t l = static_cast<std::uint64_t>(m);
        if (l < range) {
            const std::uint64_t t = (0 - range) % range;
            while (l < t) {
                m = static_cast<unsigned __int128>(next_u64()) * range;
                l = static_cast<std::uint64_t>(m);
            }
        }
        return lo + static_cast<std::int64_t>(m >> 64);
    }

    /// Standard real Gaussian, Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Standard complex Gaussian, E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double re = normal();
        const double im = normal();
        return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
    }

    /// Generator family name recorded in report headers.
    static const char* family() { return "splitmix64"; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ncpi
