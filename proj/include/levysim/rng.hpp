#pragma once

#include <cstdint>
#include <random>

namespace levysim {

/// SplitMix64 step (Steele/Lea/Flood); used to derive well-mixed stream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic seed derivation: (master, stream, index) -> engine seed.
/// Every consumer of randomness owns a logical stream id, so results never
/// depend on how samples are distributed over threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64_next(s);
    s ^= stream * 0xd1342543de82ef95ULL;
    std::uint64_t b = splitmix64_next(s);
    s ^= index * 0xaf251af3b0f025b5ULL;
    std::uint64_t c = splitmix64_next(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL) ^ (c << 1);
}

/// Fixed stream ids. Any two distinct purposes must use distinct streams.
namespace streams {
inline constexpr std::uint64_t kCanonicalSampler = 0x01;
inline constexpr std::uint64_t kIncrementSampler = 0x02;
inline constexpr std::uint64_t kBrownian = 0x03;
inline constexpr std::uint64_t kDerivativeField = 0x04;
inline constexpr std::uint64_t kChainRule = 0x05;
inline constexpr std::uint64_t kChaosEstimator = 0x06;
inline constexpr std::uint64_t kTransfer = 0x07;
inline constexpr std::uint64_t kSimulate = 0x08;
}  // namespace streams

/// Thin wrapper around a 64-bit Mersenne Twister with the distributions the
/// samplers need. One instance per (stream, sample), never shared.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double normal(double mean = 0.0, double stddev = 1.0) {
        std::normal_distribution<double> dist(mean, stddev);
        return dist(engine_);
    }

    std::int64_t poisson(double mean) {
        std::poisson_distribution<std::int64_t> dist(mean);
        return dist(engine_);
    }

    double exponential(double rate) {
        // Inverse transform; uniform() < 1 keeps the log argument positive.
        return -std::log(1.0 - uniform()) / rate;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace levysim
