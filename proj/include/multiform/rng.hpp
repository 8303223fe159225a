#pragma once

#include <cmath>
#include <cstdint>

namespace multiform {

// Counter-based stream RNG (splitmix64). Output i is a bijective mix of
// key + i*golden, so draws are a pure function of (seed, stream_id, counter)
// and independent streams can be handed to parallel trials in any order.
class Rng {
  public:
    Rng() = default;
    explicit Rng(std::uint64_t key) : state_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    // Stream key derivation: two mixing rounds avalanche seed and stream id.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id,
                      std::uint64_t substream = 0) {
        std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ULL);
        k = mix(k ^ (stream_id + 0x8e9d0c8de3bfbcafULL));
        k = mix(k ^ (substream + 0xd1b54a32d192ed03ULL));
        return Rng(k);
    }

    std::uint64_t next_u64() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

    // Uniform in [0,1), 53-bit mantissa.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; no cached spare, two uniforms per call.
    double normal() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Distance to the next Bernoulli(p) success, for sparse sampling:
    // returns k >= 0 such that the next k trials fail and trial k succeeds.
    std::uint64_t geometric_skip(double p) {
        double u = 1.0 - uniform();  // (0,1]
        return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
    }

  private:
    std::uint64_t state_ = 0;
};

}  // namespace multiform
