#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lrdspec {

/// Counter-based normal generator. Every draw is a pure function of
/// (seed, stream, counter), so per-component streams can be sampled from any
/// thread in any order and still reproduce bit-identically. Streams index
/// basis components; counters index positions within a stream.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ (stream * 0xd1342543de82ef95ull))) {}

    /// Uniform draw in the open interval (0, 1).
    double uniform(std::uint64_t counter) const {
        const std::uint64_t z = mix(key_ ^ (counter * 0x2545f4914f6cdd1dull + 0x9e3779b97f4a7c15ull));
        return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw at `index` (Box-Muller over counters 2i, 2i+1).
    double normal(std::uint64_t index) const {
        const double u1 = uniform(2 * index);
        const double u2 = uniform(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Seed for replicate r of a batch run, fed back through the mixer.
    static std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) {
        return seed ^ replicate;
    }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t key_;
};

}  // namespace lrdspec
