#pragma once

#include <cstdint>
#include <memory>

#include "levysim/canonical_path.hpp"
#include "levysim/levy_model.hpp"

namespace levysim {

/// A reproducible source of sample paths: sample(i) is a pure function of
/// (backend construction, i), so workers may draw any subset concurrently.
class PathSampler {
  public:
    virtual ~PathSampler() = default;

    virtual JumpList sample(std::uint64_t sample_index) const = 0;
    virtual const LevyTriplet& triplet() const = 0;
    virtual double horizon() const = 0;
    virtual const std::shared_ptr<const SectorPartition>& partition() const = 0;
};

/// The canonical construction: per sector, a Poisson count, uniform times and
/// i.i.d. Q_k sizes (count first, then all times, then all sizes).
class CanonicalSampler final : public PathSampler {
  public:
    CanonicalSampler(LevyTriplet triplet, std::shared_ptr<const SectorPartition> partition,
                     double horizon, std::uint64_t seed, double brownian_step = 0.0);

    JumpList sample(std::uint64_t sample_index) const override;
    const LevyTriplet& triplet() const override { return triplet_; }
    double horizon() const override { return horizon_; }
    const std::shared_ptr<const SectorPartition>& partition() const override { return partition_; }

  private:
    LevyTriplet triplet_;
    std::shared_ptr<const SectorPartition> partition_;
    double horizon_;
    std::uint64_t seed_;
    double brownian_step_;
};

}  // namespace levysim
