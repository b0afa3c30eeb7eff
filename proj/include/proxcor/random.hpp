#pragma once

// Counter-addressed random streams.
//
// Every Monte Carlo draw in the library is keyed by (seed, index, salt): the
// stream for one sample index never depends on how many other indices were
// drawn before it or on which thread drew them. Results are therefore
// reproducible for any thread count or chunking.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace proxcor {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64 from the (seed, index, salt) key.
class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
        std::uint64_t sm = seed;
        std::uint64_t key = splitmix64(sm);
        sm = key ^ (index * 0xD1B54A32D192ED03ULL);
        key = splitmix64(sm);
        sm = key ^ (salt * 0xAEF17502108EF2D9ULL);
        for (auto& s : state_) s = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via the Marsaglia polar method.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double x, y, s;
        do {
            x = 2.0 * uniform() - 1.0;
            y = 2.0 * uniform() - 1.0;
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = y * f;
        has_spare_ = true;
        return x * f;
    }

    void fill_gaussian(std::span<double> out) {
        for (auto& z : out) z = gaussian();
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Salts separating the independent uses of one user seed.
namespace salt {
inline constexpr std::uint64_t tsphere = 1;
inline constexpr std::uint64_t pair = 2;
inline constexpr std::uint64_t soper = 3;
inline constexpr std::uint64_t coverage_null = 4;
inline constexpr std::uint64_t synth_center = 5;
inline constexpr std::uint64_t synth_record = 6;
inline constexpr std::uint64_t null_disc = 7;
} // namespace salt

} // namespace proxcor
