#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace quayside {

// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256** with SplitMix64 seeding. Satisfies UniformRandomBitGenerator.
//
// Streams are addressed by (seed, stream id): `split(id)` returns a generator
// whose state depends only on the master seed and the id, so adding a new
// consumer never perturbs the draws of existing ones.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
        : seed_(seed) {
        std::uint64_t x = splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL);
        for (auto& s : state_) {
            x = splitmix64(x);
            s = x;
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
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

    [[nodiscard]] Rng split(std::uint64_t stream) const noexcept { return Rng(seed_, stream); }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t state_[4]{};
};

// Uniform on the open interval (0, 1), 53 random bits. Platform independent,
// unlike std::uniform_real_distribution.
template <class URBG>
double uniform_open01(URBG& rng) {
    for (;;) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

template <class URBG>
double exponential_draw(URBG& rng, double rate) {
    return -std::log(uniform_open01(rng)) / rate;
}

}  // namespace quayside
