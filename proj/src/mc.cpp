#include "levysim/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace levysim {

namespace {
constexpr std::uint64_t kBlockSize = 4096;
}

unsigned effective_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::vector<Accumulator> run_monte_carlo(std::uint64_t n_samples, std::size_t n_outputs,
                                         std::uint64_t master_seed, std::uint64_t stream,
                                         unsigned n_threads, const SampleFn& fn) {
    const std::uint64_t n_blocks = n_samples == 0 ? 0 : (n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<Accumulator>> blocks(n_blocks, std::vector<Accumulator>(n_outputs));

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(effective_threads(n_threads), std::max<std::uint64_t>(n_blocks, 1)));

    std::atomic<std::uint64_t> next_block{0};
    auto work = [&]() {
        std::vector<double> out(n_outputs);
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            auto& acc = blocks[b];
            const std::uint64_t lo = b * kBlockSize;
            const std::uint64_t hi = std::min(n_samples, lo + kBlockSize);
            for (std::uint64_t i = lo; i < hi; ++i) {
                Rng rng(derive_seed(master_seed, stream, i));
                fn(i, rng, out);
                for (std::size_t j = 0; j < n_outputs; ++j) acc[j].add(out[j]);
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Merge in block order: deterministic regardless of which worker ran what.
    std::vector<Accumulator> total(n_outputs);
    for (const auto& block : blocks) {
        for (std::size_t j = 0; j < n_outputs; ++j) total[j].merge(block[j]);
    }
    return total;
}

}  // namespace levysim
