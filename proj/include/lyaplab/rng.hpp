#pragma once

#include <array>
#include <cstdint>

namespace lyaplab {

/// Deterministic splittable random stream (xoshiro256++ seeded via splitmix64).
///
/// The same seed always reproduces the same sequence, independent of platform,
/// because only integer arithmetic and a fixed 53-bit double conversion are
/// used.  Parallel workers each own a child stream obtained from split(); the
/// children are statistically independent of the parent and of each other.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : root_(seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix64(x);
    }

    /// Child stream for worker `index`; deterministic in (seed, index).
    RngStream split(std::uint64_t index) const {
        std::uint64_t x = root_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return RngStream(splitmix64(x));
    }

    std::uint64_t seed() const { return root_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [-1, 1).
    double next_symmetric() { return 2.0 * next_double() - 1.0; }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t root_;
    std::array<std::uint64_t, 4> state_{};
};

} // namespace lyaplab
