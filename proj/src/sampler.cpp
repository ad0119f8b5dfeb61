#include "levysim/sampler.hpp"

#include <stdexcept>

namespace levysim {

CanonicalSampler::CanonicalSampler(LevyTriplet triplet,
                                   std::shared_ptr<const SectorPartition> partition,
                                   double horizon, std::uint64_t seed, double brownian_step)
    : triplet_(std::move(triplet)),
      partition_(std::move(partition)),
      horizon_(horizon),
      seed_(seed),
      brownian_step_(brownian_step) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (triplet_.sigma > 0.0 && !(brownian_step_ > 0.0)) {
        throw std::invalid_argument("sigma > 0 requires a positive Brownian grid step");
    }
}

JumpList CanonicalSampler::sample(std::uint64_t sample_index) const {
    Rng rng(derive_seed(seed_, streams::kCanonicalSampler, sample_index));
    JumpList jumps = sample_jump_list(partition_, horizon_, rng);
    if (triplet_.sigma > 0.0) {
        Rng brownian_rng(derive_seed(seed_, streams::kBrownian, sample_index));
        return JumpList(partition_, horizon_, jumps.sector_jumps(),
                        sample_brownian(horizon_, brownian_step_, brownian_rng));
    }
    return jumps;
}

}  // namespace levysim
