#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levysim/rng.hpp"

namespace levysim {

/// Streaming mean/variance accumulator (Welford) with an exact merge, so that
/// per-block partials combine into the same result in any block partitioning
/// as long as the merge order is fixed.
struct Accumulator {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Accumulator& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n1 = static_cast<double>(count);
        const double n2 = static_cast<double>(other.count);
        const double delta = other.mean - mean;
        const double n = n1 + n2;
        mean += delta * n2 / n;
        m2 += other.m2 + delta * delta * n1 * n2 / n;
        count += other.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }

    /// Standard error of the sample mean.
    double stderr_of_mean() const {
        if (count < 2) return 0.0;
        const double v = variance();
        return v > 0.0 ? std::sqrt(v / static_cast<double>(count)) : 0.0;
    }
};

/// Per-sample evaluation: fill `out` (size = n_outputs) from an owned Rng.
using SampleFn = std::function<void(std::uint64_t sample_index, Rng& rng, std::span<double> out)>;

/// Deterministic parallel Monte Carlo loop.
///
/// Samples are split into fixed-size blocks; workers grab blocks dynamically
/// but partial accumulators are merged in block order, and each sample owns
/// an Rng seeded by (master_seed, stream, sample_index). The result is
/// bit-identical for any thread count, including 1.
std::vector<Accumulator> run_monte_carlo(std::uint64_t n_samples, std::size_t n_outputs,
                                         std::uint64_t master_seed, std::uint64_t stream,
                                         unsigned n_threads, const SampleFn& fn);

/// Effective worker count: `requested`, or hardware concurrency when 0.
unsigned effective_threads(unsigned requested);

}  // namespace levysim
